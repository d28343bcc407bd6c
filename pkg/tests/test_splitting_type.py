import pytest

from uniform_bundles.splitting_type import SplittingType


@pytest.mark.parametrize('text', ['2;3,3;1,0', '2;3,3', '2;u=1,0;r=3,3', ' 2 ; 3,3 ; 1,0 '])
def test_parse_variants(text):
    assert SplittingType.parse(text) == SplittingType((3, 3), (1, 0))


@pytest.mark.parametrize('text', ['', '2;3,3;0,1', '3;3,3;1,0', '2;3,x;1,0', '2;3,0;1,0', '2;3,3;1,0;0'])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        SplittingType.parse(text)


def test_str_is_parseable():
    st = SplittingType((1, 2, 3), (5, 4, 3))
    assert str(st) == '3;1,2,3;5,4,3'
    assert SplittingType.parse(str(st)) == st


def test_normalization_and_gaps():
    st = SplittingType((2, 1), (4, 1))
    assert st.normalized() == SplittingType((2, 1), (3, 0))
    assert st.gaps() == [3]
    assert not st.is_consecutive()
    assert SplittingType.consecutive((1, 4, 1)).is_consecutive()
    assert SplittingType.consecutive((1, 4, 1)).is_normalized()


def test_multiset_round_trip():
    st = SplittingType((1, 3, 2), (2, 1, 0))
    assert st.multiset() == [2, 1, 1, 1, 0, 0]
    assert SplittingType.from_multiset([0, 1, 2, 1, 0, 1]) == st
    assert st.rank == 6
    assert st.k == 3
