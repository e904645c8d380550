"""scikit-learn style wrapper: learn the invariants of a family, then evaluate them."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import _validation
from .group_action import family_labels
from .invariant_solver import family_generators, family_weights, fundamental_search
from .ratpoly import render


class InvariantTransformer(TransformerMixin, BaseEstimator):
    """Map parameter vectors to the values of the fundamental invariants.

    ``fit`` ignores its data: the invariants depend only on the family and
    valence, so fitting runs the degree-by-degree search once.  ``transform``
    then evaluates the fundamental candidates on each row.

    Parameters
    ----------
    family : {"itkt", "cit"}
        Killing tensors on the Minkowski plane, or binary forms.
    n : int
        Valence (or form degree).
    max_degree : int
        Search horizon for the invariant search.
    seed : int
        Seed for the generic-point sampling.
    exact : bool
        Return Fractions (object array) when True, floats otherwise.

    Attributes
    ----------
    report_ : InvariantReport
    invariants_ : list of Poly
    feature_names_in_ : ndarray of str
    n_features_in_ : int
    """

    def __init__(self, family="itkt", n=2, max_degree=4, seed=0, exact=True):
        self.family = family
        self.n = n
        self.max_degree = max_degree
        self.seed = seed
        self.exact = exact

    def fit(self, X=None, y=None):
        family = _validation.check_family(self.family)
        n = _validation.check_positive_int(self.n, "n")
        max_degree = _validation.check_positive_int(self.max_degree, "max_degree")
        labels = family_labels(family, n)
        if X is not None:
            _validation.check_parameter_matrix(X, len(labels))
        gens = family_generators(family, n)
        self.report_ = fundamental_search(gens, max_degree, seed=self.seed,
                                          weights=family_weights(family, n),
                                          name=f"{family}{n}")
        self.invariants_ = list(self.report_.fundamentals)
        self.feature_names_in_ = np.asarray(labels, dtype=object)
        self.n_features_in_ = len(labels)
        return self

    def transform(self, X):
        check_is_fitted(self, "invariants_")
        rows = _validation.check_parameter_matrix(X, self.n_features_in_)
        names = list(self.feature_names_in_)
        out = np.empty((len(rows), len(self.invariants_)), dtype=object)
        for i, row in enumerate(rows):
            point = dict(zip(names, row))
            for j, F in enumerate(self.invariants_):
                out[i, j] = F.evaluate(point)
        if not self.exact:
            return out.astype(float)
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "invariants_")
        return np.asarray([render(F) for F in self.invariants_], dtype=object)
