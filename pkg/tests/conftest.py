import pytest

from homext import gfp
from homext.doubleext import DoubleExtensionData, PExtensionData, double_extend, extend_pstructure
from homext.twist import (
    build_heisenberg_dual,
    build_psl3,
    build_sl2_gf5,
    twist_algebra,
    twist_derivation,
    twist_pmap,
)


@pytest.fixture(scope="session")
def heis():
    return build_heisenberg_dual()


@pytest.fixture(scope="session")
def heis_ext(heis):
    L, B_L = double_extend(heis.V, heis.B, heis.ext)
    P_L = extend_pstructure(L, heis.V, heis.B, heis.P, heis.ext, heis.pext)
    return L, B_L, P_L


@pytest.fixture(scope="session")
def psl3():
    return build_psl3()


@pytest.fixture(scope="session")
def psl3_twisted(psl3):
    ga, ba = twist_algebra(psl3.g, psl3.B, psl3.twist)
    pa = twist_pmap(psl3.P, ga, psl3.twist)
    derivs = {
        name: twist_derivation(psl3.g, psl3.derivations[name], psl3.twist)
        for name in ("D2", "D3")
    }
    return ga, ba, pa, derivs


@pytest.fixture(scope="session")
def psl3_pipelines(psl3, psl3_twisted):
    """The three dim-9 extensions: D1 over untwisted psl(3), D2/D3 over psl(3)_a."""
    ga, ba, pa, derivs = psl3_twisted
    out = {}
    for name in ("D1", "D2", "D3"):
        if name == "D1":
            V, B, P, D = psl3.g, psl3.B, psl3.P, psl3.derivations["D1"]
        else:
            V, B, P, D = ga, ba, pa, derivs[name]
        ext = DoubleExtensionData(D, gfp.zeros(7), 1, 0)
        pe = PExtensionData(
            xi=psl3.table[name]["xi"], a0=psl3.table[name]["a0"],
            m=0, l=0, u0=gfp.zeros(7), P_basis=gfp.zeros(7), p=3,
        )
        L, B_L = double_extend(V, B, ext)
        P_L = extend_pstructure(L, V, B, P, ext, pe)
        out[name] = dict(V=V, B=B, P=P, D=D, ext=ext, pe=pe, L=L, B_L=B_L, P_L=P_L)
    return out


@pytest.fixture(scope="session")
def sl2():
    return build_sl2_gf5()


@pytest.fixture(scope="session")
def sl2_ext(sl2):
    L, B_L = double_extend(sl2.g, sl2.B, sl2.ext)
    P_L = extend_pstructure(L, sl2.g, sl2.B, sl2.P, sl2.ext, sl2.pext)
    return L, B_L, P_L
