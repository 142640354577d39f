"""Spectra: direct families whose carriers carry function topologies and
whose transports are certified morphisms, plus the machinery they induce on
the disjoint-union carrier (compatible choices of topology elements, the
functions they define on the sum, and the sum topology itself)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .families import (
    COVARIANT,
    DirectFamily,
    FamilyMap,
    constant_direct_family,
    direct_sum_setoid,
    restrict_family,
    validate_direct_family,
    validate_family_map,
)
from .order import induced_order
from .report import Finding
from .setoid import compose, make_fn, split_tag, tag_token
from .topology import (
    BSpace,
    CGen,
    MorphismWitness,
    RFun,
    Subbase,
    certificate_for,
    check_morphism,
    compose_rfun,
    compose_witnesses,
    lift_certificate,
    validate_certificate,
)


class SpectrumError(Exception):
    pass


class NotContinuous(SpectrumError):
    pass


class IncompatibleThread(SpectrumError):
    pass


class ThreadBoundExceeded(SpectrumError):
    pass


@dataclass(eq=False)
class Spectrum:
    """A direct family with a subbase at each index and a certificate dict
    per order edge witnessing that the transport is a morphism.

    Induced maps between topologies are definitional (precompose with the
    transport) and are computed on demand, never stored.
    """

    fam: DirectFamily
    subbases: dict  # index element -> Subbase
    witness_certs: dict  # (i, j) order pair -> {target gen index -> certificate}
    pool: tuple = (Fraction(0), Fraction(1))  # constants usable in threads

    def __post_init__(self):
        self.pool = tuple(Fraction(q) for q in self.pool)
        self._complete_witnesses()

    def _complete_witnesses(self):
        """Fill in composite edges by lifting through an intermediate index.

        Only missing edges are derived; supplied certificates are kept.
        """
        pairs = [p for p in self.fam.order_pairs() if p[0] != p[1]]
        changed = True
        while changed:
            changed = False
            for i, j in pairs:
                if (i, j) in self.witness_certs:
                    continue
                for k in self.index.elements:
                    if k in (i, j):
                        continue
                    if not (self.index.leq(i, k) and self.index.leq(k, j)):
                        continue
                    if (i, k) not in self.witness_certs or (k, j) not in self.witness_certs:
                        continue
                    if self.direction == COVARIANT:
                        w_low = self.edge_witness(i, k)
                        lower = self.space(i)
                        upper_certs = self.witness_certs[(k, j)]
                    else:
                        w_low = self.edge_witness(k, j)
                        lower = self.space(j)
                        upper_certs = self.witness_certs[(i, k)]
                    self.witness_certs[(i, j)] = {
                        m: lift_certificate(lower, w_low, c)
                        for m, c in upper_certs.items()
                    }
                    changed = True
                    break

    @property
    def index(self):
        return self.fam.index

    @property
    def direction(self):
        return self.fam.direction

    def space(self, i):
        return BSpace(self.fam.carrier(i), self.subbases[i])

    def edge_ends(self, i, j):
        """(source space, target space) of the transport for edge (i, j)."""
        if self.direction == COVARIANT:
            return self.space(i), self.space(j)
        return self.space(j), self.space(i)

    def edge_witness(self, i, j):
        certs = self.witness_certs.get((i, j))
        if certs is None:
            raise SpectrumError(f"no edge witness for ({i}, {j})")
        return MorphismWitness(self.fam.transport(i, j), dict(certs))

    def induced_map(self, i, j, f):
        """Precompose a topology element with the transport of edge (i, j)."""
        return compose_rfun(f, self.fam.transport(i, j))


def autofill_witnesses(fam, subbases, given=None, depth=4, cap=2000):
    """Complete a witness table, searching for any certificate not supplied."""
    certs = {k: dict(v) for k, v in (given or {}).items()}
    for i, j in fam.order_pairs():
        if i == j:
            continue
        src_sub = subbases[i] if fam.direction == COVARIANT else subbases[j]
        dst_sub = subbases[j] if fam.direction == COVARIANT else subbases[i]
        src = BSpace(fam.carrier(i) if fam.direction == COVARIANT else fam.carrier(j), src_sub)
        table = certs.setdefault((i, j), {})
        for k, g in enumerate(dst_sub.gens):
            if k in table:
                continue
            pulled = compose_rfun(g, fam.transport(i, j))
            found = certificate_for(src, pulled, depth, cap)
            if found is None:
                raise SpectrumError(
                    f"no certificate found for generator {k} on edge ({i}, {j})")
            table[k] = found
    return certs


def make_spectrum(fam, subbases, witness_certs=None, pool=(0, 1), auto=False,
                  depth=4, cap=2000):
    pool = tuple(Fraction(q) for q in pool)
    if auto:
        witness_certs = autofill_witnesses(fam, subbases, witness_certs, depth, cap)
    s = Spectrum(fam, dict(subbases), dict(witness_certs or {}), pool)
    findings = validate_spectrum(s)
    if findings:
        raise SpectrumError(str(findings[0]))
    return s


def constant_spectrum(index, sp, pool=(0, 1), direction=COVARIANT):
    """One space, identity transports, generator certificates everywhere."""
    fam = constant_direct_family(index, sp.carrier, direction)
    subbases = {i: sp.subbase for i in index.elements}
    certs = {}
    for i, j in fam.order_pairs():
        if i != j:
            certs[(i, j)] = {k: CGen(k) for k in range(len(sp.gens))}
    return Spectrum(fam, subbases, certs, tuple(Fraction(q) for q in pool))


def validate_spectrum(s, check_composition=True):
    findings = [f for f in validate_direct_family(s.fam)]
    for i in s.index.elements:
        if i not in s.subbases:
            findings.append(Finding("subbase-missing", (i,)))
    if findings:
        return findings
    for i, j in s.fam.order_pairs():
        if i == j:
            continue
        src, dst = s.edge_ends(i, j)
        try:
            w = s.edge_witness(i, j)
        except SpectrumError:
            findings.append(Finding("edge-witness-missing", (i, j)))
            continue
        for f in check_morphism(src, dst, w):
            findings.append(Finding("edge-" + f.law, (i, j) + f.witness, f.note))
    if findings or not check_composition:
        return findings
    # Composite edges also validate when their certificates are assembled by
    # lifting through an intermediate index.
    for i, j in s.fam.order_pairs():
        for k in s.index.elements:
            if i == j or j == k or not s.index.leq(j, k):
                continue
            if s.direction == COVARIANT:
                lo, mid = s.space(i), s.space(j)
                hi = s.space(k)
                w1, w2 = s.edge_witness(i, j), s.edge_witness(j, k)
                composite = compose_witnesses(lo, mid, hi, w1, w2)
                for f in check_morphism(lo, hi, composite):
                    findings.append(Finding("composite-" + f.law, (i, j, k)))
            else:
                hi, mid = s.space(k), s.space(j)
                lo = s.space(i)
                w2, w1 = s.edge_witness(j, k), s.edge_witness(i, j)
                composite = compose_witnesses(hi, mid, lo, w2, w1)
                for f in check_morphism(hi, lo, composite):
                    findings.append(Finding("composite-" + f.law, (i, j, k)))
    return findings


# --- compatible choices of topology elements (threads) ----------------------

@dataclass(eq=False)
class Thread:
    """One topology element per index, compatible with the transports.

    For a covariant spectrum the components pull back down the order:
    funcs[i] = funcs[j] . transport(i, j) whenever i <= j.  Each component
    carries a certificate over its own subbase.
    """

    funcs: dict  # index element -> RFun
    certs: dict = field(default_factory=dict)  # index element -> certificate

    def at(self, i):
        return self.funcs[i]


def validate_thread(s, t, check_certs=True):
    findings = []
    for i in s.index.elements:
        if i not in t.funcs:
            findings.append(Finding("thread-partial", (i,)))
            return findings
    for i, j in s.fam.order_pairs():
        if s.direction == COVARIANT:
            pulled = s.induced_map(i, j, t.at(j))
            if pulled.values != t.at(i).values:
                findings.append(Finding("thread-compat", (i, j)))
        else:
            pulled = s.induced_map(i, j, t.at(i))
            if pulled.values != t.at(j).values:
                findings.append(Finding("thread-compat", (i, j)))
    if check_certs:
        for i in s.index.elements:
            c = t.certs.get(i)
            if c is None:
                findings.append(Finding("thread-cert-missing", (i,)))
                continue
            rep = validate_certificate(s.space(i), t.at(i), c)
            if not rep.ok:
                findings.append(Finding("thread-cert", (i,), str(rep.findings[0])))
    return findings


def enumerate_threads(s, cap=10_000):
    """All compatible choices whose components are generators or constants
    from the declared pool, by backtracking along a linear extension."""
    els = list(s.index.elements)
    els.sort(key=lambda i: sum(1 for j in els if s.index.leq(j, i)))
    candidates = {}
    for i in els:
        sp = s.space(i)
        cands = []
        seen = set()
        for k, g in enumerate(sp.gens):
            key = tuple(g.values[x] for x in sp.carrier.elements)
            if key not in seen:
                seen.add(key)
                cands.append((g, CGen(k)))
        for q in s.pool:
            key = tuple(Fraction(q) for _ in sp.carrier.elements)
            if key not in seen:
                seen.add(key)
                from .topology import CConst, rconst
                cands.append((rconst(sp.carrier, q), CConst(Fraction(q))))
        candidates[i] = cands

    out = []
    visited = 0

    def compatible(assigned, i, f):
        for j, g in assigned.items():
            if s.index.leq(j, i):
                if s.direction == COVARIANT:
                    if s.induced_map(j, i, f).values != g.values:
                        return False
                else:
                    if s.induced_map(j, i, g).values != f.values:
                        return False
            if s.index.leq(i, j):
                if s.direction == COVARIANT:
                    if s.induced_map(i, j, g).values != f.values:
                        return False
                else:
                    if s.induced_map(i, j, f).values != g.values:
                        return False
        return True

    def extend(pos, assigned, certs):
        nonlocal visited
        if pos == len(els):
            out.append(Thread(dict(assigned), dict(certs)))
            return
        i = els[pos]
        for f, c in candidates[i]:
            visited += 1
            if visited > cap:
                raise ThreadBoundExceeded(visited)
            if compatible(assigned, i, f):
                assigned[i] = f
                certs[i] = c
                extend(pos + 1, assigned, certs)
                del assigned[i]
                del certs[i]

    extend(0, {}, {})
    # Dedupe pointwise-equal threads.
    seen, unique = set(), []
    for t in out:
        key = tuple(
            tuple(t.at(i).values[x] for x in s.fam.carrier(i).elements)
            for i in els)
        if key not in seen:
            seen.add(key)
            unique.append(t)
    return unique


def thread_to_sum_function(s, t, sum_s=None):
    """The function (i, x) -> component-at-i applied to x, on the direct sum.

    Compatibility of the components makes it constant on sum classes; the
    extensionality check happens in the RFun constructor.
    """
    findings = validate_thread(s, t, check_certs=False)
    if findings:
        raise IncompatibleThread(str(findings[0]))
    if sum_s is None:
        sum_s = direct_sum_setoid(s.fam)
    values = {}
    for a in sum_s.elements:
        i, x = split_tag(a)
        values[a] = t.at(i)(x)
    return RFun(sum_s, values)


def sum_space(s, threads=None, cap=10_000, sum_s=None):
    """The direct-sum carrier topologized by the thread functions."""
    if s.direction != COVARIANT:
        raise SpectrumError("sum space is built over a covariant spectrum")
    if threads is None:
        threads = enumerate_threads(s, cap)
    if sum_s is None:
        sum_s = direct_sum_setoid(s.fam)
    gens, names, seen = [], [], set()
    for n, t in enumerate(threads):
        f = thread_to_sum_function(s, t, sum_s)
        key = tuple(f.values[x] for x in sum_s.elements)
        if key in seen:
            continue
        seen.add(key)
        gens.append(f)
        names.append(f"thr{n}")
    return BSpace(sum_s, Subbase(sum_s, tuple(gens), tuple(names))), threads


# --- maps between spectra ----------------------------------------------------

@dataclass(eq=False)
class SpectrumMap:
    """A family map, optionally with per-index continuity certificates."""

    comps: dict  # index element -> SetoidFn
    continuity: dict | None = None  # index element -> {gen index -> certificate}

    def family_map(self):
        return FamilyMap(dict(self.comps))

    def at(self, i):
        return self.comps[i]

    def witness(self, src_space, i):
        if self.continuity is None or i not in self.continuity:
            raise NotContinuous(f"no continuity certificates at {i}")
        return MorphismWitness(self.comps[i], dict(self.continuity[i]))


def validate_spectrum_map(s, t, psi):
    findings = validate_family_map(s.fam, t.fam, psi.family_map())
    if psi.continuity is not None:
        for i in s.index.elements:
            try:
                w = psi.witness(s.space(i), i)
            except NotContinuous:
                findings.append(Finding("continuity-missing", (i,)))
                continue
            for f in check_morphism(s.space(i), t.space(i), w):
                findings.append(Finding("continuity-" + f.law, (i,) + f.witness))
    return findings


def identity_spectrum_map(s):
    from .setoid import identity as sid
    comps = {i: sid(s.fam.carrier(i)) for i in s.index.elements}
    conts = {
        i: {k: CGen(k) for k in range(len(s.space(i).gens))}
        for i in s.index.elements
    }
    return SpectrumMap(comps, conts)


def compose_spectrum_maps(s, t, u, psi, xi):
    comps = {i: compose(psi.comps[i], xi.comps[i]) for i in psi.comps}
    continuity = None
    if psi.continuity is not None and xi.continuity is not None:
        continuity = {}
        for i in comps:
            w = compose_witnesses(s.space(i), t.space(i), u.space(i),
                                  psi.witness(s.space(i), i),
                                  xi.witness(t.space(i), i))
            continuity[i] = w.certs
    return SpectrumMap(comps, continuity)


def pullback_thread(s, t, psi, thread_over_t):
    """Compose a compatible choice over the target with the map components;
    certificates come from lifting through the continuity witnesses."""
    if psi.continuity is None:
        raise NotContinuous("pullback needs continuity certificates")
    funcs, certs = {}, {}
    for i in s.index.elements:
        w = psi.witness(s.space(i), i)
        funcs[i] = compose_rfun(thread_over_t.at(i), psi.comps[i])
        c = thread_over_t.certs.get(i)
        if c is None:
            raise IncompatibleThread(f"target thread lacks a certificate at {i}")
        certs[i] = lift_certificate(s.space(i), w, c)
    pulled = Thread(funcs, certs)
    findings = validate_thread(s, pulled)
    if findings:
        raise IncompatibleThread(str(findings[0]))
    return pulled


def sigma_spectrum_map(s, t, psi, sum_src=None, sum_dst=None):
    """The induced map of direct sums, (i, x) -> (i, psi_i(x))."""
    if sum_src is None:
        sum_src = direct_sum_setoid(s.fam)
    if sum_dst is None:
        sum_dst = direct_sum_setoid(t.fam)
    table = {}
    for a in sum_src.elements:
        i, x = split_tag(a)
        table[a] = tag_token(i, psi.comps[i](x))
    return make_fn(sum_src, sum_dst, table)


def check_sum_morphisms(s, t, psi, threads_s=None, threads_t=None, cap=10_000):
    """The tagging maps and the induced sum map are morphisms for the sum
    topologies: tagging pulls a thread function back to the thread's own
    component, and the sum map pulls one back to the pulled-back thread."""
    findings = []
    sum_src = direct_sum_setoid(s.fam)
    space_s, threads_s = sum_space(s, threads_s, cap, sum_src)
    for i in s.index.elements:
        for t_obj in threads_s:
            f = thread_to_sum_function(s, t_obj, sum_src)
            for x in s.fam.carrier(i).elements:
                if f.values[tag_token(i, x)] != t_obj.at(i)(x):
                    findings.append(Finding("tagging-pullback", (i, x)))
        # each pulled-back generator carries the thread's own certificate
        for t_obj in threads_s:
            c = t_obj.certs.get(i)
            if c is None:
                findings.append(Finding("tagging-cert-missing", (i,)))
                continue
            rep = validate_certificate(s.space(i), t_obj.at(i), c)
            if not rep.ok:
                findings.append(Finding("tagging-cert", (i,)))
    if psi is None:
        return findings
    if psi.continuity is None:
        findings.append(Finding("not-continuous", ()))
        return findings
    sum_dst = direct_sum_setoid(t.fam)
    space_t, threads_t = sum_space(t, threads_t, cap, sum_dst)
    smap = sigma_spectrum_map(s, t, psi, sum_src, sum_dst)
    for h_obj in threads_t:
        g = thread_to_sum_function(t, h_obj, sum_dst)
        pulled_fun = compose_rfun(g, smap)
        pulled_thread = pullback_thread(s, t, psi, h_obj)
        expected = thread_to_sum_function(s, pulled_thread, sum_src)
        if pulled_fun.values != expected.values:
            findings.append(Finding("sum-map-pullback", ()))
    return findings


def check_induced_square(s, t, psi, edge):
    """On one edge, pulling a generator through the map then the transport
    agrees with the other path around the square."""
    i, j = edge
    out = []
    for g in t.space(j).gens:
        if s.direction == COVARIANT:
            left = compose_rfun(compose_rfun(g, psi.comps[j]), s.fam.transport(i, j))
            right = compose_rfun(compose_rfun(g, t.fam.transport(i, j)), psi.comps[i])
        else:
            left = compose_rfun(compose_rfun(g, psi.comps[j]), s.fam.transport(i, j))
            right = compose_rfun(compose_rfun(g, t.fam.transport(i, j)), psi.comps[i])
        if left.values != right.values:
            out.append(Finding("induced-square", (i, j)))
            break
    return not out


def restrict_spectrum(s, cof, sub_index=None):
    """The spectrum reindexed along a cofinal subset's embedding."""
    if sub_index is None:
        sub_index = induced_order(s.index, cof)
    h = make_fn(sub_index.base, s.index.base, cof.embed.table())
    fam = restrict_family(s.fam, sub_index, h)
    subbases = {j: s.subbases[cof.embed(j)] for j in sub_index.elements}
    certs = {}
    for a, b in sub_index.order_pairs():
        if a == b:
            continue
        certs[(a, b)] = dict(s.witness_certs[(cof.embed(a), cof.embed(b))])
    return Spectrum(fam, subbases, certs, s.pool)


def product_spectrum(s, t):
    """Componentwise spectrum over the product order, with each factor's
    generators pulled back through the projections."""
    from .order import product_order
    from .setoid import pair_token, split_pair
    from .topology import product_space

    if s.direction != t.direction:
        raise SpectrumError("factors must share a direction")
    prod_index = product_order(s.index, t.index)
    carriers, spaces, projections = {}, {}, {}
    for a in prod_index.elements:
        i, j = split_pair(a)
        sp, pr1, pr2 = product_space(s.space(i), t.space(j))
        carriers[a] = sp.carrier
        spaces[a] = sp.subbase
        projections[a] = (pr1, pr2)
    transports = {}
    for a, b in prod_index.order_pairs():
        i, j = split_pair(a)
        i2, j2 = split_pair(b)
        if s.direction == COVARIANT:
            dom, cod = carriers[a], carriers[b]
            ti, tj = s.fam.transport(i, i2), t.fam.transport(j, j2)
        else:
            dom, cod = carriers[b], carriers[a]
            ti, tj = s.fam.transport(i, i2), t.fam.transport(j, j2)
        table = {}
        for el in dom.elements:
            x, y = split_pair(el)
            table[el] = pair_token(ti(x), tj(y))
        transports[(a, b)] = make_fn(dom, cod, table)
    fam = DirectFamily(prod_index, s.direction, carriers, transports)
    from .topology import reindex_certificate

    certs = {}
    for a, b in prod_index.order_pairs():
        if a == b:
            continue
        i, j = split_pair(a)
        i2, j2 = split_pair(b)
        edge_s = s.witness_certs[(i, i2)] if i != i2 else None
        edge_t = t.witness_certs[(j, j2)] if j != j2 else None
        if s.direction == COVARIANT:
            # certificates live over the subbase at a, prove the gens at b
            s_src_n = len(s.space(i).gens)
            t_src_n = len(t.space(j).gens)
            s_tgt_n = len(s.space(i2).gens)
            t_tgt_n = len(t.space(j2).gens)
        else:
            # certificates live over the subbase at b, prove the gens at a
            s_src_n = len(s.space(i2).gens)
            t_src_n = len(t.space(j2).gens)
            s_tgt_n = len(s.space(i).gens)
            t_tgt_n = len(t.space(j).gens)
        first_map = {m: m for m in range(s_src_n)}
        second_map = {m: s_src_n + m for m in range(t_src_n)}
        table = {}
        for k in range(s_tgt_n):
            base = CGen(k) if edge_s is None else edge_s[k]
            table[k] = reindex_certificate(base, first_map)
        for k in range(t_tgt_n):
            base = CGen(k) if edge_t is None else edge_t[k]
            table[s_tgt_n + k] = reindex_certificate(base, second_map)
        certs[(a, b)] = table
    pool = tuple(sorted(set(s.pool) | set(t.pool)))
    return Spectrum(fam, spaces, certs, pool), projections
