import numpy as np
import pytest

from whlab.automorphisms import (
    NielsenAuto,
    WhiteheadAuto,
    apply,
    apply_sequence,
    auto_from_json,
    auto_to_json,
    enumerate_nielsen,
    enumerate_whitehead,
    get_universe,
    inverse_auto,
    nielsen_to_whitehead,
    whitehead_to_nielsen,
)
from whlab.engine import length_changes
from whlab.errors import InvalidInputError
from whlab.words import Word, cyclic_normal_form, free_reduce, word_from_text

from conftest import random_cyclic_words


def test_nielsen_counts():
    for n in range(1, 7):
        assert len(enumerate_nielsen(n)) == 4 * n * (n - 1)


def test_whitehead_counts():
    for n in range(1, 7):
        assert len(enumerate_whitehead(n)) == 2 * n * 4 ** (n - 1) - 2 * n


def test_rank_one_is_empty():
    assert enumerate_nielsen(1) == []
    assert enumerate_whitehead(1) == []


def test_enumerations_are_duplicate_free():
    for n in (2, 3, 4):
        nielsen = enumerate_nielsen(n)
        whitehead = enumerate_whitehead(n)
        assert len(set(nielsen)) == len(nielsen)
        assert len(set(whitehead)) == len(whitehead)


def test_nielsen_images_inside_whitehead():
    for n in (2, 3):
        nielsen_images = {nielsen_to_whitehead(t, n) for t in enumerate_nielsen(n)}
        single_sided = {
            wa for wa in enumerate_whitehead(n) if whitehead_to_nielsen(wa) is not None
        }
        assert nielsen_images == single_sided


def test_apply_shortens_spec_pairs():
    # a -> ab and b -> ba each shorten a*b^-1 from 2 letters to 1
    w = word_from_text("aB", 2, cyclic=True)
    assert len(apply(NielsenAuto(1, "R", 2), w)) == 1
    assert len(apply(NielsenAuto(2, "R", 1), w)) == 1


def test_apply_identity_like_move_keeps_word():
    # conjugation by a fixes every cyclic word
    w = word_from_text("abab", 2, cyclic=True)
    conj = WhiteheadAuto(1, (0, 3))
    assert cyclic_normal_form(apply(conj, w)) == cyclic_normal_form(w)


def test_apply_rank_mismatch():
    w = word_from_text("ab", 2, cyclic=True)
    with pytest.raises(InvalidInputError):
        apply(NielsenAuto(3, "R", 1), w)
    with pytest.raises(InvalidInputError):
        apply(WhiteheadAuto(1, (0, 1, 1)), w)


def test_apply_sequence_empty_is_identity():
    w = word_from_text("abab", 2, cyclic=True)
    assert apply_sequence([], w) == w


def test_apply_sequence_substitution_example():
    # b -> a^-1 b turns abab into a(a^-1 b)a(a^-1 b) = bb
    w = word_from_text("abab", 2, cyclic=True)
    out = apply_sequence([NielsenAuto(2, "L", -1)], w)
    assert out.letters == (2, 2)


def test_inverse_round_trip_exhaustive_small():
    words = random_cyclic_words(2, 25, 10, seed=3)
    uni = get_universe(2)
    for ref in uni.refs:
        inv = inverse_auto(ref)
        assert uni.index_of.get(inv) is not None  # inverse stays in the universe
        for w in words:
            back = apply_sequence([ref, inv], w)
            assert cyclic_normal_form(back) == cyclic_normal_form(w)


def test_inverse_round_trip_rank3_nielsen():
    words = random_cyclic_words(3, 10, 12, seed=4)
    for t in enumerate_nielsen(3):
        for w in words:
            back = apply_sequence([t, inverse_auto(t)], w)
            assert cyclic_normal_form(back) == cyclic_normal_form(w)


def test_apply_never_returns_unreduced():
    words = random_cyclic_words(3, 15, 20, seed=5)
    uni = get_universe(3)
    rng = np.random.default_rng(0)
    for w in words:
        for i in rng.choice(uni.size, size=12, replace=False):
            out = apply(uni.refs[int(i)], w)
            Word(out.letters, out.rank)  # constructor re-checks free reduction
            assert out.is_cyclically_reduced


def test_length_change_formula_matches_apply():
    # the vectorised sweep must agree with really rewriting the word
    for rank in (2, 3):
        uni = get_universe(rank)
        for w in random_cyclic_words(rank, 12, 24, seed=rank):
            delta = length_changes(w)
            for i, ref in enumerate(uni.refs):
                assert len(apply(ref, w)) - len(w) == delta[i]


def test_universe_layout():
    for rank in (2, 3):
        uni = get_universe(rank)
        assert uni.size == 2 * rank * 4 ** (rank - 1) - 2 * rank
        assert uni.n_nielsen == 4 * rank * (rank - 1)
        assert uni.refs[: uni.n_nielsen] == enumerate_nielsen(rank)
        assert all(isinstance(r, WhiteheadAuto) for r in uni.refs[uni.n_nielsen :])


def test_json_roundtrip():
    for auto in enumerate_nielsen(3)[:6]:
        assert auto_from_json(auto_to_json(auto)) == auto
    # action tables list every non-multiplier generator, so the rank is
    # recoverable and the roundtrip is exact
    for auto in enumerate_whitehead(3)[:40]:
        assert auto_from_json(auto_to_json(auto)) == auto


def test_json_shapes():
    t = NielsenAuto(1, "R", -2)
    assert auto_to_json(t) == {"kind": "nielsen", "target": 1, "side": "R", "mult": -2}
    wa = WhiteheadAuto(1, (0, 3))
    assert auto_to_json(wa) == {"kind": "whitehead", "a": 1, "actions": {"2": "conj"}}


def test_json_rejects_garbage():
    with pytest.raises(InvalidInputError):
        auto_from_json({"kind": "nope"})
    with pytest.raises(InvalidInputError):
        auto_from_json({"kind": "nielsen", "target": 1})
