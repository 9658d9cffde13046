import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from moduli.cyclo import CycloElement
from moduli.polys import Poly
from moduli.projline import INF, MoebiusMap, ProjPoint
from moduli.ratmap import RationalMap


N = 12  # default working conductor for randomized suites


def C(v, n=N):
    return CycloElement.from_rational(n, Fraction(v))


def zeta(e=1, n=N):
    return CycloElement.zeta(n, e)


def pt(v, n=N):
    return ProjPoint(C(v, n)) if not isinstance(v, CycloElement) else ProjPoint(v)


ONE = CycloElement.one(N)
ZERO = CycloElement.zero(N)


small_fraction = st.builds(
    Fraction,
    st.integers(min_value=-4, max_value=4),
    st.sampled_from([1, 2, 3]),
)

cyclo_elements = st.builds(
    lambda coeffs: CycloElement(N, coeffs),
    st.tuples(small_fraction, small_fraction, small_fraction, small_fraction),
)

nonzero_cyclo = cyclo_elements.filter(lambda x: not x.is_zero())


@st.composite
def moebius_maps(draw):
    """Invertible by construction: [[1,0],[c,1]] . [[u,b],[0,1]], det = u."""
    u = draw(cyclo_elements)
    if u.is_zero():
        u = CycloElement.one(N)
    b = draw(cyclo_elements)
    c = draw(cyclo_elements)
    T = MoebiusMap(u, b, c * u, c * b + 1)
    if draw(st.booleans()):
        zero = CycloElement.zero(N)
        T = T.compose(MoebiusMap(zero, CycloElement.one(N), CycloElement.one(N), zero))
    return T


@st.composite
def rational_moebius(draw):
    """Moebius maps with rational entries (Galois-fixed), invertible."""
    u = C(draw(small_fraction))
    if u.is_zero():
        u = CycloElement.one(N)
    b = C(draw(small_fraction))
    c = C(draw(small_fraction))
    return MoebiusMap(u, b, c * u, c * b + 1)


def random_element(rng, n=N):
    from moduli.cyclo import euler_phi

    return CycloElement(
        n, [Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3]))
            for _ in range(euler_phi(n))])


def random_nonzero(rng, n=N):
    while True:
        x = random_element(rng, n)
        if not x.is_zero():
            return x


def random_moebius(rng, n=N):
    while True:
        a, b, c, d = (random_element(rng, n) for _ in range(4))
        if not (a * d - b * c).is_zero():
            return MoebiusMap(a, b, c, d)


def random_factored_map(rng, n=N, max_points=3):
    """A factored rational map with distinct small support."""
    candidates = [C(v, n) for v in (0, 1, -1, 2, -2, 3)] + [zeta(1, n), zeta(5, n)]
    rng.shuffle(candidates)
    npts = rng.randint(1, max_points)
    pairs = []
    for x in candidates[:npts]:
        m = rng.choice([-2, -1, 1, 2])
        pairs.append((ProjPoint(x), m))
    lead = random_nonzero(rng, n)
    return RationalMap.from_factored(lead, pairs)


@pytest.fixture
def rng():
    return random.Random(20240817)
