import numpy as np
import pytest
from sklearn.base import clone

from gensym.estimators import CurvatureInvariants, GeometryClassifier
from gensym.models import LABELS, get_model, sample_points


def _X(n=6, seed=0, model="type1"):
    return np.array(sample_points(n, seed, get_model(model).domain))


def test_invariants_shape_and_names():
    X = _X()
    tr = CurvatureInvariants(model="type1", params={"lambda": 2.0})
    F = tr.fit_transform(X)
    assert F.shape == (6, 10)
    assert list(tr.get_feature_names_out()) == list(CurvatureInvariants.feature_names)
    assert np.isfinite(F).all()


def test_invariants_type2_values():
    F = CurvatureInvariants(model="type2", params={"lambda": 1.0}).fit_transform(_X(model="type2"))
    np.testing.assert_allclose(F[:, 0], -12.0, atol=1e-9)
    # constant spectra along the chart
    np.testing.assert_allclose(F[:, 4:], np.broadcast_to(F[0, 4:], F[:, 4:].shape), atol=1e-8)


def test_lorentzian_has_nan_weyl_columns():
    F = CurvatureInvariants(model="typeC").fit_transform(_X(3, model="typeC"))
    assert np.isnan(F[:, 4:]).all()
    assert np.isfinite(F[:, :4]).all()


def test_wrong_width_rejected():
    tr = CurvatureInvariants().fit(np.zeros((1, 4)))
    with pytest.raises(ValueError, match="4 coordinates"):
        tr.transform(np.zeros((2, 3)))


def test_unfitted_raises():
    from sklearn.exceptions import NotFittedError
    with pytest.raises(NotFittedError):
        CurvatureInvariants().transform(np.zeros((1, 4)))


def test_clone_and_params():
    c = GeometryClassifier(model="type2", witness=1e-2)
    d = clone(c)
    assert d.get_params() == c.get_params()
    assert d.get_params()["witness"] == 1e-2
    d.set_params(model="type1")
    assert c.model == "type2"


@pytest.mark.parametrize("model,label", [("type1", "TypeI"), ("type2", "TypeII"), ("typeC", "LocallySymmetric")])
def test_predict_labels(model, label):
    X = _X(4, 1, model)
    clf = GeometryClassifier(model=model).fit(X)
    assert list(clf.classes_) == list(LABELS)
    assert (clf.predict(X) == label).all()


def test_evidence_is_per_point():
    X = _X(3)
    ev = GeometryClassifier().fit(X).evidence(X)
    assert len(ev) == 3


def test_explicit_metric(flat):
    clf = GeometryClassifier(metric=flat).fit(np.zeros((2, 4)))
    assert (clf.predict(np.zeros((2, 4))) == "LocallySymmetric").all()
