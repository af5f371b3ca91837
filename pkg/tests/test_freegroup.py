from fractions import Fraction as F

import numpy as np
import pytest

from src import config
from src.hgspec.algebra import mul_basis
from src.hgspec.errors import ParameterDomainError, ResourceBoundError
from src.hgspec.freegroup import (
    Word,
    ball_dimension,
    ball_distances,
    ball_words,
    distance,
    enumerate_sphere,
    gram_matrix,
    haagerup_gram,
    kesten_halfwidth,
    radial_convolve,
    random_reduced_word,
    sign_twist_check,
    sphere_count,
    sphere_size,
)
from src.hgspec.params import Param


# ---------- words ----------

def test_word_reduction_and_inverse():
    assert Word.of([1, -1, 2]) == Word((2,))
    w = Word.of([1, 2, -1])
    assert (w * ~w).is_identity()
    assert (~w * w).is_identity()
    assert Word((1, 2)) * Word((-2, 1)) == Word((1, 1))
    assert str(Word((1, -2))) == "g1 g2^-1"
    assert str(Word.identity()) == "e"


def test_letter_zero_is_rejected():
    with pytest.raises(ParameterDomainError):
        Word.of([1, 0])


def test_distance_is_word_length_of_quotient():
    g = Word((1, 2, 2))
    h = Word((1, 1))
    assert distance(g, h) == len(~g * h)
    assert distance(g, g) == 0
    assert distance(Word.identity(), g) == 3


# ---------- spheres ----------

def test_sphere_sizes():
    assert sphere_size(2, 0) == 1
    assert sphere_size(2, 1) == 4
    assert sphere_size(2, 2) == 12
    assert sphere_size(2, 3) == 36
    assert sphere_size(3, 2) == 30
    assert ball_dimension(2, 3) == 53


def test_rank_one_is_rejected():
    with pytest.raises(ParameterDomainError):
        sphere_size(1, 2)


@pytest.mark.parametrize("l, n", [(2, 3), (2, 5), (3, 3)])
def test_enumeration_counts_reduced_words(session, l, n):
    words = enumerate_sphere(l, n, session=session)
    assert len(words) == sphere_size(l, n)
    assert len(set(words)) == len(words)
    assert all(w.is_reduced() and len(w) == n for w in words)
    assert session.counters.get("freegroup.words_enumerated") == len(words)


def test_sphere_bound(session):
    with pytest.raises(ResourceBoundError) as exc:
        enumerate_sphere(2, 9, session=session)
    assert exc.value.limit == config.MAX_SPHERE_SIZE


def test_random_word_is_reduced():
    rng = np.random.default_rng(3)
    for _ in range(20):
        w = random_reduced_word(3, 10, rng)
        assert len(w) == 10
        assert w.is_reduced()
        assert w.rank() <= 3


def test_sphere_count():
    assert sphere_count(2, 1, 1, Word((1, 1))) == 1
    assert sphere_count(2, 1, 3, Word((1, 1))) == 3


@pytest.mark.parametrize("l, m, n, k", [(2, 2, 3, 3), (2, 3, 3, 4), (2, 4, 2, 4), (2, 3, 2, 5), (3, 2, 2, 2), (3, 3, 2, 3)])
def test_sphere_count_is_the_same_for_every_word_of_a_length(l, m, n, k):
    rng = np.random.default_rng(100 * l + 10 * m + k)
    counts = {sphere_count(l, m, n, random_reduced_word(l, k, rng)) for _ in range(5)}
    counts.add(sphere_count(l, m, n, Word((1,) * k)))
    assert len(counts) == 1
    assert min(counts) > 0


def test_kesten_halfwidth_matches_cut():
    assert kesten_halfwidth(2) == pytest.approx(Param(F(1, 4)).halfwidth)


# ---------- radial convolution oracle ----------

@pytest.mark.oracle
@pytest.mark.parametrize("l, maxlen", [(2, 8), (3, 6)])
def test_radial_convolution_matches_algebra(session, l, maxlen):
    r = F(1, 2 * l)
    for total in range(maxlen + 1):
        for m in range(total + 1):
            assert radial_convolve(m, total - m, l, session=session) == mul_basis(m, total - m, r), (m, total - m)


def test_convolution_bound(session):
    with pytest.raises(ResourceBoundError):
        radial_convolve(7, 6, 2, session=session)


# ---------- Haagerup Gram matrices ----------

def test_ball_distances_match_words():
    words = ball_words(2, 2)
    dist = ball_distances(words)
    for i in (0, 3, 7, 16):
        for j in (1, 5, 12):
            assert dist[i, j] == distance(words[i], words[j])
    np.testing.assert_array_equal(dist, dist.T)


@pytest.mark.oracle
@pytest.mark.parametrize("lam", ["1", "3/2", "2", "-2", "sqrt(3)"])
def test_haagerup_positive_on_ball(session, lam):
    report = haagerup_gram(lam, 2, 3, session=session)
    assert report.dimension == 53
    assert report.psd
    assert report.residual_ok
    assert sign_twist_check(lam, 2, 3, session=session)


def test_haagerup_fails_inside_unit_disc(session):
    report = haagerup_gram("1/2", 2, 2, session=session)
    assert report.min_eigenvalue < -0.5
    assert not report.psd


def test_haagerup_needs_real_lambda(session):
    with pytest.raises(ParameterDomainError):
        haagerup_gram("1+1i", 2, 1, session=session)


def test_shift_invert_agrees_with_dense(session, monkeypatch):
    dense = haagerup_gram("2", 2, 2, session=session)
    monkeypatch.setattr(config, "DENSE_EIG_MAX_DIM", 5)
    sparse = haagerup_gram("2", 2, 2, session=session)
    assert dense.method == "dense"
    assert sparse.method == "shift-invert"
    assert sparse.min_eigenvalue == pytest.approx(dense.min_eigenvalue, abs=1e-8)


def test_gram_matrix_values():
    a = gram_matrix(2.0, 2, 1)
    assert a.shape == (5, 5)
    assert np.all(np.diag(a) == 1.0)
    assert a[0, 1] == 0.5
    assert a[1, 2] == 0.25
