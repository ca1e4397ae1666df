import json
import math

import numpy as np
import pytest
from conftest import fig1_params

from djcm import DeformationKind, SweepSpec, default_figure_specs, evolve, figure_panels, mandel_q, run_sweep


def _spec(**kw):
    base = dict(axis="time", start=0.0, stop=2.0, count=5, witnesses=("mandel",), params=fig1_params())
    base.update(kw)
    return SweepSpec(**base)


def test_rows_grouped_by_kind_then_node():
    table = run_sweep(_spec(), workers=2)
    assert table.columns == ("time", "kind", "q_mandel", "status")
    assert [r[1] for r in table.rows] == ["sin"] * 5 + ["invsin"] * 5 + ["ln"] * 5
    t = table.column("time", "ln")
    assert np.allclose(t, np.linspace(0, 2, 5))
    q = table.column("q_mandel", "sin")
    assert q[2] == mandel_q(evolve(fig1_params(), 1.0))


def test_worker_count_does_not_change_output():
    spec = _spec(witnesses=("mandel", "squeeze", "wigner"))
    assert run_sweep(spec, workers=1).to_csv() == run_sweep(spec, workers=3).to_csv()


def test_failed_node_keeps_row():
    # |beta| = 80 needs more than the 4096-level cap
    spec = _spec(axis="beta_mag", start=1.0, stop=80.0, count=2, deformations=(DeformationKind.sin(),))
    table = run_sweep(spec)
    assert table.rows[0][-1] == "ok"
    assert table.rows[1][-1] == "TruncationTooLarge"
    assert math.isnan(table.rows[1][2])
    assert ",nan,TruncationTooLarge" in table.to_csv()
    assert json.loads(table.to_json())["rows"][1]["q_mandel"] is None


def test_complex_grid_axis():
    spec = _spec(axis="beta_complex_grid", start=-1.0, stop=1.0, count=3, witnesses=("husimi",))
    table = run_sweep(spec)
    assert table.columns[:2] == ("beta_re", "beta_im")
    assert len(table.rows) == 27
    assert table.rows[1][:2] == (0.0, -1.0)


def test_photon_index_axis():
    spec = _spec(axis="photon_index", start=0, stop=4, count=5, witnesses=("pnd",))
    p = run_sweep(spec).column("p_n", "sin")
    from scipy.stats import poisson

    assert np.allclose(p, poisson.pmf(np.arange(5), 4.0), atol=1e-14)


@pytest.mark.parametrize(
    "kw",
    [dict(axis="nope"), dict(count=1), dict(start=3.0), dict(witnesses=("bogus",)), dict(witnesses=())],
)
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        _spec(**kw)


def test_csv_header_carries_spec():
    text = run_sweep(_spec(count=2)).to_csv()
    first = text.splitlines()[0]
    assert first.startswith("# spec: ")
    assert json.loads(first[len("# spec: ") :])["axis"] == "time"


def test_figure_panels():
    panels = figure_panels()
    assert {"fig1a", "fig1d", "fig2c", "fig3a", "fig5b", "fig6h"} <= set(panels)
    specs = default_figure_specs()
    assert [s.witnesses[0] for s in specs] == ["pnd", "mandel", "wigner", "d1", "squeeze", "husimi"]
    assert all(s.params == fig1_params() for s in specs)


def test_rows_equal_pointwise_evaluation(rng):
    from djcm import antibunching_d1, husimi_q, photon_number_dist, squeezing, wigner

    spec = _spec(stop=10.0, count=40, witnesses=("pnd", "mandel", "d1", "squeeze", "wigner", "husimi"), point=0.5 + 0.5j)
    table = run_sweep(spec, workers=2)
    kinds = {k.token: k for k in spec.deformations}
    for i in rng.choice(len(table.rows), 10, replace=False):
        t, kind, pn, q, d1, sx, sp, w, hq, status = table.rows[i]
        s = evolve(fig1_params(kinds[kind]), t)
        assert status == "ok"
        assert (pn, q, d1, (sx, sp), w, hq) == (
            photon_number_dist(s, 5),
            mandel_q(s),
            antibunching_d1(s),
            squeezing(s),
            wigner(s, 0.5 + 0.5j),
            husimi_q(s, 0.5 + 0.5j),
        )
