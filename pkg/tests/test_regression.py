"""Tests for the linear-algebra substrate."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from jpepselect.errors import (
    InsufficientDataError,
    InvalidModelError,
    ParseError,
    SingularDesignError,
)
from jpepselect.regression import (
    Dataset,
    ModelFit,
    ModelSpec,
    build_design,
    fit_rss,
    load_csv,
    rank_check,
)

from oracles import rss_normal_equations


def make_dataset(n=20, p=4, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    y = X @ rng.standard_normal(p) + rng.standard_normal(n)
    return Dataset(y=y, X=X, names=tuple(f"x{j}" for j in range(1, p + 1)))


class TestDataset:
    def test_rejects_constant_column(self):
        X = np.column_stack([np.ones(5), np.arange(5.0)])
        with pytest.raises(InvalidModelError, match="constant"):
            Dataset(y=np.arange(5.0), X=X, names=("a", "b"))

    def test_rejects_nonfinite(self):
        X = np.arange(10.0).reshape(5, 2)
        y = np.array([1.0, 2.0, np.nan, 4.0, 5.0])
        with pytest.raises(InvalidModelError):
            Dataset(y=y, X=X, names=("a", "b"))

    def test_rejects_length_mismatch(self):
        with pytest.raises(InvalidModelError):
            Dataset(y=np.arange(4.0), X=np.arange(10.0).reshape(5, 2), names=("a", "b"))

    def test_shape_accessors(self):
        data = make_dataset(n=12, p=3)
        assert data.n == 12
        assert data.p == 3


class TestModelSpec:
    def test_sorts_and_dedups(self):
        spec = ModelSpec((3, 1, 3))
        assert spec.included == (1, 3)
        assert spec.dim == 3

    def test_null_model(self):
        spec = ModelSpec(())
        assert spec.dim == 1
        assert str(spec) == "{}"

    def test_rejects_nonpositive_index(self):
        with pytest.raises(InvalidModelError):
            ModelSpec((0, 2))

    def test_bitmask(self):
        assert ModelSpec((1, 3)).bitmask() == 0b101


class TestBuildDesign:
    def test_single_covariate(self):
        data = make_dataset(n=10, p=3)
        D = build_design(data, ModelSpec((2,)))
        assert D.shape == (10, 2)
        assert_allclose(D[:, 0], 1.0)
        assert_allclose(D[:, 1], data.X[:, 1])

    def test_null_model_is_ones(self):
        data = make_dataset(n=7, p=3)
        D = build_design(data, ModelSpec(()))
        assert D.shape == (7, 1)
        assert_allclose(D, 1.0)

    def test_full_model(self):
        data = make_dataset(n=10, p=3)
        D = build_design(data, ModelSpec((1, 2, 3)))
        assert D.shape == (10, 4)
        assert_allclose(D[:, 1:], data.X)

    def test_index_out_of_range(self):
        data = make_dataset(p=3)
        with pytest.raises(InvalidModelError):
            build_design(data, ModelSpec((4,)))


class TestRankCheck:
    def test_identity_full_rank(self):
        assert rank_check(np.eye(3)).full_rank

    def test_duplicated_column_deficient(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(8)
        report = rank_check(np.column_stack([x, x]))
        assert not report.full_rank
        assert report.deficient_columns

    def test_two_intercepts_deficient(self):
        report = rank_check(np.ones((6, 2)))
        assert not report.full_rank

    def test_more_columns_than_rows(self):
        assert not rank_check(np.ones((2, 3))).full_rank


class TestFitRss:
    def test_constant_response_null_model(self):
        data = Dataset(
            y=np.ones(4), X=np.arange(8.0).reshape(4, 2), names=("a", "b")
        )
        fit = fit_rss(data, ModelSpec(()))
        assert fit.rss == pytest.approx(0.0, abs=1e-12)
        assert (fit.n, fit.d) == (4, 1)

    def test_null_model_deviations_from_mean(self):
        data = Dataset(y=np.array([0.0, 2.0]), X=np.array([[1.0], [2.0]]), names=("a",))
        assert fit_rss(data, ModelSpec(())).rss == pytest.approx(2.0)

    def test_exact_linear_fit(self):
        x = np.array([1.0, 2.0, 3.0])
        data = Dataset(y=x.copy(), X=x[:, None], names=("a",))
        assert fit_rss(data, ModelSpec((1,))).rss == pytest.approx(0.0, abs=1e-20)

    def test_singular_design_raises_with_columns(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal(10)
        data = Dataset(y=rng.standard_normal(10), X=np.column_stack([x, x]), names=("a", "b"))
        with pytest.raises(SingularDesignError) as exc_info:
            fit_rss(data, ModelSpec((1, 2)))
        assert exc_info.value.columns

    def test_insufficient_rows(self):
        rng = np.random.default_rng(3)
        data = Dataset(y=rng.standard_normal(2), X=rng.standard_normal((2, 3)), names=("a", "b", "c"))
        with pytest.raises(InsufficientDataError):
            fit_rss(data, ModelSpec((1, 2, 3)))

    def test_nesting_monotonicity(self):
        data = make_dataset(n=30, p=5, seed=4)
        nested_pairs = [
            (ModelSpec(()), ModelSpec((2,))),
            (ModelSpec((2,)), ModelSpec((2, 4))),
            (ModelSpec((1, 3)), ModelSpec((1, 3, 5))),
            (ModelSpec((1,)), ModelSpec((1, 2, 3, 4, 5))),
        ]
        for small, big in nested_pairs:
            assert fit_rss(data, small).rss >= fit_rss(data, big).rss - 1e-12

    def test_orthogonal_complement_identity_on_centered_data(self):
        rng = np.random.default_rng(5)
        X = rng.standard_normal((25, 3))
        X = X - X.mean(axis=0)
        y = X @ np.array([1.0, -2.0, 0.5]) + rng.standard_normal(25)
        y = y - y.mean()
        data = Dataset(y=y, X=X, names=("a", "b", "c"))
        model = ModelSpec((1, 2, 3))
        rss = fit_rss(data, model).rss
        D = build_design(data, model)
        yhat = D @ np.linalg.lstsq(D, y, rcond=None)[0]
        assert_allclose(rss + yhat @ yhat, y @ y, rtol=1e-12)

    def test_agrees_with_normal_equations(self):
        rng = np.random.default_rng(6)
        for trial in range(10):
            n = int(rng.integers(10, 51))
            p = int(rng.integers(1, 9))
            X = rng.standard_normal((n, p))
            y = X @ rng.standard_normal(p) + rng.standard_normal(n)
            data = Dataset(y=y, X=X, names=tuple(f"x{j}" for j in range(1, p + 1)))
            k = int(rng.integers(0, p + 1))
            model = ModelSpec(tuple(rng.choice(np.arange(1, p + 1), size=k, replace=False)))
            got = fit_rss(data, model).rss
            want = rss_normal_equations(y, build_design(data, model))
            assert_allclose(got, want, rtol=1e-10, atol=1e-12)


class TestModelFit:
    def test_rejects_d_above_n(self):
        with pytest.raises(InsufficientDataError):
            ModelFit(n=3, d=4, rss=1.0)

    def test_rejects_negative_rss(self):
        with pytest.raises(InvalidModelError):
            ModelFit(n=5, d=2, rss=-0.1)


class TestLoadCsv:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("y,a,b\n1.0,2.0,3.0\n4.0,5.0,6.5\n-1.0,0.5,2.0\n")
        data = load_csv(path, "y")
        assert data.names == ("a", "b")
        assert_allclose(data.y, [1.0, 4.0, -1.0])
        assert_allclose(data.X[:, 1], [3.0, 6.5, 2.0])

    def test_response_column_anywhere(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("a,y\n2.0,1.0\n5.0,4.0\n")
        data = load_csv(path, "y")
        assert data.names == ("a",)
        assert_allclose(data.y, [1.0, 4.0])

    def test_missing_response(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("a,b\n1.0,2.0\n")
        with pytest.raises(ParseError, match="response"):
            load_csv(path, "y")

    def test_non_numeric_cell_names_row_and_column(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("y,a\n1.0,2.0\n3.0,oops\n")
        with pytest.raises(ParseError, match=r"row 3.*'a'"):
            load_csv(path, "y")

    def test_ragged_row(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("y,a\n1.0,2.0\n3.0\n")
        with pytest.raises(ParseError, match="row 3"):
            load_csv(path, "y")

    def test_duplicate_header(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("y,a,a\n1.0,2.0,3.0\n")
        with pytest.raises(ParseError, match="duplicate"):
            load_csv(path, "y")

    def test_empty_file(self, tmp_path):
        path = tmp_path / "data.csv"
        path.write_text("")
        with pytest.raises(ParseError, match="empty"):
            load_csv(path, "y")
