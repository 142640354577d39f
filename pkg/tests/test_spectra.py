from fractions import Fraction

import pytest

from bspec.families import direct_sum_setoid
from bspec.fixtures import chain3, cspec, constant_cspec
from bspec.setoid import make_fn
from bspec.spectra import (
    IncompatibleThread,
    Thread,
    ThreadBoundExceeded,
    check_induced_square,
    check_sum_morphisms,
    enumerate_threads,
    identity_spectrum_map,
    make_spectrum,
    product_spectrum,
    pullback_thread,
    restrict_spectrum,
    sum_space,
    thread_to_sum_function,
    validate_spectrum,
    validate_spectrum_map,
    SpectrumMap,
)
from bspec.fixtures import eo_cofinal
from bspec.topology import CConst, rconst, validate_certificate


def test_constant_spectrum_valid():
    assert validate_spectrum(constant_cspec()) == []


def test_cspec_valid():
    assert validate_spectrum(cspec()) == []


def test_cspec_broken_witness_reported():
    s = cspec()
    bad = dict(s.witness_certs)
    f2 = s.subbases["2"]
    # claim the pulled-back generator is constant 1 instead of 0
    bad[("1", "2")] = {0: CConst(Fraction(1))}
    from bspec.spectra import Spectrum

    broken = Spectrum(s.fam, s.subbases, bad, s.pool)
    laws = {f.law for f in validate_spectrum(broken)}
    assert any("witness-certificate" in law for law in laws)


def test_autofill_witnesses():
    s = cspec()
    rebuilt = make_spectrum(s.fam, s.subbases, witness_certs=None, pool=s.pool,
                            auto=True)
    assert validate_spectrum(rebuilt) == []


def test_enumerate_threads_cspec():
    s = cspec()
    threads = enumerate_threads(s)
    tables = {
        tuple(t.at(i)(x) for i in ("0", "1", "2")
              for x in s.fam.carrier(i).elements)
        for t in threads
    }
    # constants 0 and 1 are compatible; the generator triple is not a thread
    # because the top generator pulls back to the constant 0, not to f0
    assert (Fraction(0),) * 5 in tables
    assert (Fraction(1),) * 5 in tables
    assert len(threads) == 2


def test_threads_on_constant_spectrum_include_generator():
    s = constant_cspec()
    threads = enumerate_threads(s)
    # the generator itself and both pool constants survive compatibility
    assert len(threads) == 3


def test_thread_functions_are_class_constant():
    s = cspec()
    sum_s = direct_sum_setoid(s.fam)
    for t in enumerate_threads(s):
        f = thread_to_sum_function(s, t, sum_s)
        for a in sum_s.elements:
            for b in sum_s.elements:
                if sum_s.eq(a, b):
                    assert f(a) == f(b)


def test_incompatible_thread_rejected():
    s = cspec()
    funcs = {
        "0": s.subbases["0"].gens[0],            # (a:0, b:1)
        "1": rconst(s.fam.carrier("1"), 0),
        "2": rconst(s.fam.carrier("2"), 0),
    }
    with pytest.raises(IncompatibleThread):
        thread_to_sum_function(s, Thread(funcs))


def test_constant_thread_gives_constant_sum_function():
    s = cspec()
    t = Thread({i: rconst(s.fam.carrier(i), 5) for i in s.index.elements})
    f = thread_to_sum_function(s, t)
    assert set(f.values.values()) == {Fraction(5)}


def test_sum_space_carrier_and_gens():
    s = cspec()
    sp, threads = sum_space(s)
    assert sp.carrier.class_count() == 1
    # two constant threads give two generators (0 and 1)
    assert len(sp.gens) == 2


def test_empty_thread_list_gives_empty_subbase():
    s = cspec()
    sp, _ = sum_space(s, threads=[])
    assert sp.gens == ()


def test_pullback_thread_identity():
    s = cspec()
    psi = identity_spectrum_map(s)
    for t in enumerate_threads(s):
        back = pullback_thread(s, s, psi, t)
        for i in s.index.elements:
            assert back.at(i).values == t.at(i).values


def test_sum_morphisms_and_square():
    s = constant_cspec()
    psi = identity_spectrum_map(s)
    assert validate_spectrum_map(s, s, psi) == []
    assert check_sum_morphisms(s, s, psi) == []
    for (i, j) in s.fam.order_pairs():
        assert check_induced_square(s, s, psi, (i, j))


def test_collapse_map_to_constant_spectrum():
    s = cspec()
    # target: constant spectrum on the one-point space with subbase {0}
    from bspec.spectra import constant_spectrum
    from bspec.setoid import discrete
    from bspec.topology import space

    pt = discrete(["z"])
    tsp = constant_spectrum(chain3(), space(pt, [rconst(pt, 0)], ["c"]),
                            pool=(0, 1))
    comps = {
        i: make_fn(s.fam.carrier(i), pt,
                   {x: "z" for x in s.fam.carrier(i).elements})
        for i in s.index.elements
    }
    conts = {i: {0: CConst(Fraction(0))} for i in s.index.elements}
    psi = SpectrumMap(comps, conts)
    assert validate_spectrum_map(s, tsp, psi) == []
    assert check_sum_morphisms(s, tsp, psi) == []
    const_threads = enumerate_threads(tsp)
    for h in const_threads:
        back = pullback_thread(s, tsp, psi, h)
        for i in s.index.elements:
            rep = validate_certificate(s.space(i), back.at(i), back.certs[i])
            assert rep.ok


def test_restrict_spectrum_to_evens():
    s = constant_cspec()
    # reuse the same chain as EO(1): {0,1,2} with evens {0,2}
    cof = eo_cofinal(1)
    r = restrict_spectrum(s, cof)
    assert validate_spectrum(r) == []
    assert set(r.index.elements) == {"0", "2"}


def test_product_spectrum_valid():
    s = constant_cspec()
    t = constant_cspec()
    prod, projections = product_spectrum(s, t)
    assert validate_spectrum(prod) == []
    threads = enumerate_threads(prod)
    assert threads  # at least the pooled constants survive
    sp, _ = sum_space(prod, threads)
    assert sp.carrier.class_count() == 4


def test_product_spectrum_cspec():
    s = cspec()
    prod, _ = product_spectrum(s, s)
    assert validate_spectrum(prod) == []
    sp, _ = sum_space(prod)
    assert sp.carrier.class_count() == 1


def test_sum_morphisms_flags_missing_continuity():
    s = constant_cspec()
    bare = SpectrumMap(identity_spectrum_map(s).comps, None)
    findings = check_sum_morphisms(s, s, bare)
    assert any(f.law == "not-continuous" for f in findings)


def test_thread_bound_exceeded():
    s = constant_cspec()
    with pytest.raises(ThreadBoundExceeded):
        enumerate_threads(s, cap=1)
