"""Analytic vs central-difference gradients for every layer type.

Each case runs 20+ randomized trials at small shapes; the engine shadows
the checks in float64 while keeping the contractual step h=1e-3 and
relative tolerance 1e-2.
"""

import numpy as np
import pytest

from cood import nn
from cood.nn import Tensor, grad_check, layers

TRIALS = 20
TOL = nn.REL_TOLERANCE


def run_trials(make_case, trials=TRIALS):
    worst = 0.0
    for trial in range(trials):
        rng = np.random.default_rng(1000 + trial)
        fn, leaves = make_case(rng)
        report = grad_check(fn, leaves, rng=rng)
        worst = max(worst, report.overall)
        assert report.passed(TOL), f"trial {trial}: rel err {report.overall:.3e}"
    return worst


def test_linear_map_is_exact():
    def case(rng):
        w = rng.normal(size=(5, 3))
        x = rng.normal(size=(2, 5))

        def fn(leaves):
            return (leaves["x"] @ leaves["w"]).sum()

        return fn, {"w": w, "x": x}

    assert run_trials(case) < 1e-6


def test_elementwise_ops():
    def case(rng):
        x = rng.normal(size=(4, 6)) + 0.1

        def fn(leaves):
            y = nn.gelu(leaves["x"])
            y = nn.tanh(y)
            y = nn.mul(y, y)
            return y.mean()

        return fn, {"x": x}

    run_trials(case)


def test_softmax_cross_entropy_composite():
    target = np.array([[0, 3], [1, 2]])

    def case(rng):
        logits = rng.normal(size=(2, 2, 4))

        def fn(leaves):
            return nn.cross_entropy_grid(leaves["logits"], target)

        return fn, {"logits": logits}

    run_trials(case)


def test_softmax_op():
    def case(rng):
        x = rng.normal(size=(3, 7))
        coef = rng.normal(size=(3, 7))

        def fn(leaves):
            return nn.mul(nn.softmax(leaves["x"], axis=-1), Tensor(coef)).sum()

        return fn, {"x": x}

    run_trials(case)


def test_layer_norm():
    def case(rng):
        x = rng.normal(size=(4, 6))
        gamma = rng.normal(1.0, 0.2, size=6)
        beta = rng.normal(size=6)
        coef = rng.normal(size=(4, 6))

        def fn(leaves):
            y = nn.layer_norm(leaves["x"], leaves["gamma"], leaves["beta"])
            return nn.mul(y, Tensor(coef)).sum()

        return fn, {"x": x, "gamma": gamma, "beta": beta}

    run_trials(case)


def test_batch_norm_training_mode():
    def case(rng):
        x = rng.normal(size=(5, 3, 3, 4))
        gamma = rng.normal(1.0, 0.2, size=4)
        beta = rng.normal(size=4)
        coef = rng.normal(size=(5, 3, 3, 4))

        def fn(leaves):
            rm = np.zeros(4)
            rv = np.ones(4)
            y = nn.batch_norm(leaves["x"], leaves["gamma"], leaves["beta"],
                              rm, rv, training=True)
            return nn.mul(y, Tensor(coef)).sum()

        return fn, {"x": x, "gamma": gamma, "beta": beta}

    run_trials(case)


def test_conv2d():
    def case(rng):
        x = rng.normal(size=(2, 6, 6, 3))
        w = rng.normal(size=(3, 3, 3, 4)) * 0.4
        b = rng.normal(size=4)
        coef = rng.normal(size=(2, 3, 3, 4))

        def fn(leaves):
            y = nn.conv2d(leaves["x"], leaves["w"], leaves["b"], stride=2, pad=1)
            return nn.mul(y, Tensor(coef)).sum()

        return fn, {"x": x, "w": w, "b": b}

    run_trials(case)


def test_conv_transpose2d():
    def case(rng):
        x = rng.normal(size=(2, 3, 3, 4))
        w = rng.normal(size=(3, 3, 4, 3)) * 0.4
        b = rng.normal(size=3)
        coef = rng.normal(size=(2, 6, 6, 3))

        def fn(leaves):
            y = nn.conv_transpose2d(leaves["x"], leaves["w"], leaves["b"],
                                    stride=2, pad=1, out_pad=1)
            return nn.mul(y, Tensor(coef)).sum()

        return fn, {"x": x, "w": w, "b": b}

    run_trials(case)


def test_spatial_gating_4x6():
    def case(rng):
        x = rng.normal(size=(4, 6))
        gamma = rng.normal(1.0, 0.2, size=3)
        beta = rng.normal(size=3)
        w = rng.normal(size=(4, 4)) * 0.5
        bias = rng.normal(size=4)
        coef = rng.normal(size=(4, 3))

        def fn(leaves):
            y = layers.spatial_gating_forward(
                leaves["x"], leaves["gamma"], leaves["beta"], leaves["w"], leaves["bias"]
            )
            return nn.mul(y, Tensor(coef)).sum()

        return fn, {"x": x, "gamma": gamma, "beta": beta, "w": w, "bias": bias}

    run_trials(case)


def test_attention_full_and_axial():
    def case(rng):
        x = rng.normal(size=(1, 3, 2, 4))
        qw = rng.normal(size=(4, 4)) * 0.5
        kw = rng.normal(size=(4, 4)) * 0.5
        vw = rng.normal(size=(4, 4)) * 0.5
        coef = rng.normal(size=(1, 3, 2, 4))

        def fn(leaves):
            b, h, w_, c = 1, 3, 2, 4
            flat = leaves["x"].reshape(b * h, w_, c)
            q = flat @ leaves["qw"]
            k = flat @ leaves["kw"]
            v = flat @ leaves["vw"]
            y = layers.attention(q, k, v, heads=2).reshape(b, h, w_, c)
            return nn.mul(y, Tensor(coef)).sum()

        return fn, {"x": x, "qw": qw, "kw": kw, "vw": vw}

    run_trials(case)


def test_einsum2_patterns():
    def case(rng):
        a = rng.normal(size=(2, 5, 3))
        b = rng.normal(size=(2, 3, 3, 4))
        coef = rng.normal(size=(2, 5, 3, 4))

        def fn(leaves):
            y = nn.einsum2("btc,brck->btrk", leaves["a"], leaves["b"])
            return nn.mul(y, Tensor(coef)).sum()

        return fn, {"a": a, "b": b}

    run_trials(case)


def test_embedding_and_concat():
    idx = np.array([[0, 2], [1, 1]])

    def case(rng):
        table = rng.normal(size=(3, 4))
        other = rng.normal(size=(2, 2, 2))

        def fn(leaves):
            e = nn.embedding(leaves["table"], idx)
            y = nn.concat([e, leaves["other"]], axis=-1)
            return nn.mul(y, y).sum()

        return fn, {"table": table, "other": other}

    run_trials(case)


def cast_store_f64(store):
    for _, t, _ in store.items():
        t.data = t.data.astype(np.float64)


def test_gmlp_block_end_to_end():
    def case(rng):
        store = nn.ParamStore()
        block = layers.GMLPBlock(store, "g", tokens=5, dim=6, ffn_dim=8, rng=rng)
        cast_store_f64(store)
        coef = rng.normal(size=(2, 5, 6))
        leaves = {name: t for name, t in store.trainable()}
        leaves["x"] = Tensor(rng.normal(size=(2, 5, 6)), requires_grad=True)

        def fn(lv):
            return nn.mul(block(lv["x"]), Tensor(coef)).sum()

        return fn, leaves

    run_trials(case, trials=10)


def test_non_finite_forward_raises():
    def fn(leaves):
        return nn.log(leaves["x"]).sum()

    with np.errstate(invalid="ignore"):
        with pytest.raises(FloatingPointError):
            grad_check(fn, {"x": np.array([-1.0, 2.0])})


def test_report_fields():
    def fn(leaves):
        return nn.mul(leaves["x"], leaves["x"]).sum()

    report = grad_check(fn, {"x": np.array([1.0, -2.0])})
    assert set(report.per_param) == {"x"}
    assert report.overall >= 0
    assert report.passed()
