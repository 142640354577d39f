"""Morphism-space spectra and the duality between direct and inverse limits.

Pre- and post-composition turn a spectrum and a fixed space into four
spectra of morphism carriers.  Over finite validated pools the two duality
isomorphisms are checked two-sidedly, and the two converse-direction maps
are built and certified as morphisms, with the embedding half of the first
one conditional on a representative-existence hypothesis that is itself
decided by enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from .families import CONTRAVARIANT, COVARIANT, DirectFamily
from .limits import direct_limit, inverse_limit, limit_legs_cocone
from .report import Finding
from .setoid import (
    check_extensional,
    compose,
    is_embedding,
    make_fn,
    split_tag,
    tag_token,
)
from .spectra import Spectrum, Thread, thread_to_sum_function
from .topology import (
    BSpace,
    CGen,
    MorphismWitness,
    RFun,
    certificate_for,
    check_morphism,
    compose_rfun,
    exp_eval_certificate,
    exponential_space,
    gen_position,
    lift_certificate,
    validate_certificate,
)


class DualityError(Exception):
    pass


class PoolNotClosed(DualityError):
    pass


SHAPES = ("A_i", "A_ii", "B_i", "B_ii")


@dataclass(eq=False)
class MorCarrier:
    """A finite pool of validated morphism witnesses between two spaces."""

    src: BSpace
    dst: BSpace
    exp: object  # ExpSpace over the pool

    @property
    def setoid(self):
        return self.exp.carrier

    @property
    def space(self):
        return self.exp.space

    def witness(self, name):
        return self._witnesses[name]

    def names(self):
        return list(self.setoid.elements)

    def find(self, fn):
        """Pool token pointwise equal to a map, or None."""
        for name in self.setoid.elements:
            m = self.exp.by_name[name]
            if all(self.dst.carrier.eq(m(x), fn(x)) for x in m.dom.elements):
                return name
        return None


def make_mor_carrier(src, dst, witnesses, names=None):
    for n, w in enumerate(witnesses):
        bad = check_morphism(src, dst, w)
        if bad:
            raise DualityError(f"pool element {n} is not a morphism: {bad[0]}")
    exp = exponential_space(src, dst, witnesses, names)
    mc = MorCarrier(src, dst, exp)
    mc._witnesses = dict(zip(exp.carrier.elements, witnesses))
    return mc


def enumerate_morphisms(src, dst, depth=4, cap=4096):
    """All extensional maps that admit certificates for every target
    generator, as witnesses; the map space itself is capped."""
    src_classes = src.carrier.classes()
    total = len(dst.carrier.elements) ** len(src_classes)
    if total > cap:
        raise DualityError(f"map space of size {total} exceeds the bound")
    out = []
    for choice in iproduct(dst.carrier.elements, repeat=len(src_classes)):
        table = {}
        for cls, val in zip(src_classes, choice):
            for a in cls:
                table[a] = val
        h = make_fn(src.carrier, dst.carrier, table)
        certs = {}
        ok = True
        for k, g in enumerate(dst.gens):
            cert = certificate_for(src, compose_rfun(g, h), depth)
            if cert is None:
                ok = False
                break
            certs[k] = cert
        if ok:
            out.append(MorphismWitness(h, certs))
    return out


def precompose_action(lam, mid_src, mid_dst, fixed, pool_from, pool_to):
    """Send a morphism out of mid_dst to its composite after lam.

    lam : mid_src -> mid_dst; elements of pool_from map mid_dst -> fixed;
    the composite lands in pool_to (else the pool is not closed).
    """
    table = {}
    for name in pool_from.setoid.elements:
        w = pool_from.witness(name)
        composite = compose(lam.h, w.h)
        target = pool_to.find(composite)
        if target is None:
            raise PoolNotClosed(f"composite of {name} leaves the pool")
        table[name] = target
    return make_fn(pool_from.setoid, pool_to.setoid, table)


def postcompose_action(mu, mid_src, mid_dst, fixed, pool_from, pool_to):
    """Send a morphism into mid_src to its composite followed by mu.

    mu : mid_src -> mid_dst; elements of pool_from map fixed -> mid_src.
    """
    table = {}
    for name in pool_from.setoid.elements:
        w = pool_from.witness(name)
        target = pool_to.find(compose(w.h, mu.h))
        if target is None:
            raise PoolNotClosed(f"composite of {name} leaves the pool")
        table[name] = target
    return make_fn(pool_from.setoid, pool_to.setoid, table)


def check_precompose_is_morphism(lam_pool, from_pool, to_pool, fixed):
    """The pre-composition action is itself a morphism of exponential
    spaces: every evaluation generator pulls back to a transformed
    derivation over the action's source evaluation subbase."""
    findings = []
    for phi_name in from_pool.setoid.elements:
        phi = from_pool.witness(phi_name)
        for y in lam_pool.dst.carrier.elements:
            for k, f0 in enumerate(fixed.gens):
                # pulled generator: lam -> f0(phi(lam(y)))
                values = {
                    name: f0(phi.h(lam_pool.witness(name).h(y)))
                    for name in lam_pool.setoid.elements
                }
                target = RFun(lam_pool.setoid, values)
                cert = exp_eval_certificate(phi.certs[k], y, lam_pool.exp)
                rep = validate_certificate(lam_pool.space, target, cert)
                if not rep.ok:
                    findings.append(Finding("precompose-cert",
                                            (phi_name, y, k)))
    return findings


def check_postcompose_is_morphism(mu_pool, from_pool, fixed):
    """The post-composition action is a morphism of exponential spaces:
    evaluating the composite at a point is evaluation at the image point,
    which is itself a generator of the action's source subbase."""
    findings = []
    for theta_name in from_pool.setoid.elements:
        theta = from_pool.witness(theta_name)
        for x in fixed.carrier.elements:
            for k in range(len(mu_pool.dst.gens)):
                g0 = mu_pool.dst.gens[k]
                values = {
                    name: g0(mu_pool.witness(name).h(theta.h(x)))
                    for name in mu_pool.setoid.elements
                }
                target = RFun(mu_pool.setoid, values)
                pos = mu_pool.exp.positions.get((theta.h(x), k))
                if pos is None or mu_pool.exp.gens[pos].values != target.values:
                    findings.append(Finding("postcompose-gen",
                                            (theta_name, x, k)))
    return findings


# --- the four induced spectra ------------------------------------------------

def induce_spectrum(s, fixed, shape, pools):
    """Build the morphism-space spectrum of the given shape over s's index.

    pools maps each index element to a list of MorphismWitness values of
    the appropriate type; each pool must be closed under the induced
    transports.
    """
    if shape not in SHAPES:
        raise DualityError(f"unknown shape {shape!r}")
    if shape in ("A_i", "A_ii") and s.direction != COVARIANT:
        raise DualityError("shape needs a covariant source spectrum")
    if shape in ("B_i", "B_ii") and s.direction != CONTRAVARIANT:
        raise DualityError("shape needs a contravariant source spectrum")
    hom_into_fixed = shape in ("A_i", "B_i")
    out_direction = {
        "A_i": CONTRAVARIANT,
        "A_ii": COVARIANT,
        "B_i": COVARIANT,
        "B_ii": CONTRAVARIANT,
    }[shape]

    carriers_mc = {}
    for i in s.index.elements:
        if hom_into_fixed:
            carriers_mc[i] = make_mor_carrier(
                s.space(i), fixed, pools[i],
                names=[f"{i}.m{n}" for n in range(len(pools[i]))])
        else:
            carriers_mc[i] = make_mor_carrier(
                fixed, s.space(i), pools[i],
                names=[f"{i}.m{n}" for n in range(len(pools[i]))])

    transports = {}
    for i, j in s.fam.order_pairs():
        if i == j:
            continue
        lam = s.fam.transport(i, j)
        if shape == "A_i":
            # Mor(F_j, fixed) -> Mor(F_i, fixed), h -> h after lam_ij
            frm, to = carriers_mc[j], carriers_mc[i]
            act = lambda w, lam=lam: compose(lam, w.h)
        elif shape == "A_ii":
            # Mor(fixed, F_i) -> Mor(fixed, F_j), h -> lam_ij after h
            frm, to = carriers_mc[i], carriers_mc[j]
            act = lambda w, lam=lam: compose(w.h, lam)
        elif shape == "B_i":
            # Mor(F_i, fixed) -> Mor(F_j, fixed), h -> h after lam_ji
            frm, to = carriers_mc[i], carriers_mc[j]
            act = lambda w, lam=lam: compose(lam, w.h)
        else:  # B_ii
            # Mor(fixed, F_j) -> Mor(fixed, F_i), h -> lam_ji after h
            frm, to = carriers_mc[j], carriers_mc[i]
            act = lambda w, lam=lam: compose(w.h, lam)
        table = {}
        for name in frm.setoid.elements:
            target = to.find(act(frm.witness(name)))
            if target is None:
                raise PoolNotClosed(f"edge ({i}, {j}) pushes {name} out of the pool")
            table[name] = target
        transports[(i, j)] = make_fn(frm.setoid, to.setoid, table)

    carriers = {i: carriers_mc[i].setoid for i in s.index.elements}
    fam = DirectFamily(s.index, out_direction, carriers, _saturate_reflexive(
        s, transports, carriers))
    subbases = {i: carriers_mc[i].space.subbase for i in s.index.elements}
    certs = _induced_edge_certs(s, fixed, shape, carriers_mc)
    spec = Spectrum(fam, subbases, certs, s.pool)
    return spec, carriers_mc


def _saturate_reflexive(s, transports, carriers):
    from .setoid import identity

    table = dict(transports)
    for i, j in s.fam.order_pairs():
        if i == j:
            table[(i, j)] = identity(carriers[i])
    return table


def _induced_edge_certs(s, fixed, shape, carriers_mc):
    """Certificates for the induced transports against the evaluation
    subbases: evaluation generators pull back to evaluation generators,
    except where the source spectrum's own edge certificates are routed
    through the evaluation transform."""
    certs = {}
    for i, j in s.fam.order_pairs():
        if i == j:
            continue
        lam = s.fam.transport(i, j)
        table = {}
        if shape == "A_i":
            # target subbase at i, source subbase at j (contravariant)
            tgt, src = carriers_mc[i], carriers_mc[j]
            for (x, k), pos in _gen_items(tgt):
                table[pos] = CGen(src.exp.positions[(lam(x), k)])
        elif shape == "B_i":
            # covariant: target at j, source at i
            tgt, src = carriers_mc[j], carriers_mc[i]
            for (y, k), pos in _gen_items(tgt):
                table[pos] = CGen(src.exp.positions[(lam(y), k)])
        elif shape == "A_ii":
            # covariant: target at j, source at i; route the source
            # spectrum's certificate for g0 . lam through evaluation
            tgt, src = carriers_mc[j], carriers_mc[i]
            edge = s.witness_certs[(i, j)]
            for (x, k), pos in _gen_items(tgt):
                table[pos] = exp_eval_certificate(edge[k], x, src.exp)
        else:  # B_ii
            # contravariant: target at i, source at j
            tgt, src = carriers_mc[i], carriers_mc[j]
            edge = s.witness_certs[(i, j)]
            for (x, k), pos in _gen_items(tgt):
                table[pos] = exp_eval_certificate(edge[k], x, src.exp)
        certs[(i, j)] = table
    return certs


def _gen_items(mc):
    """Unique (element, target gen index) -> subbase position items."""
    seen = set()
    for (x, k), pos in mc.exp.positions.items():
        if pos in seen:
            continue
        seen.add(pos)
        yield (x, k), pos


# --- duality principle: hom out of a direct limit ----------------------------

@dataclass
class DualityResult:
    to_hom: object      # map from the compatible-choice side to the hom side
    from_hom: object
    to_hom_witness: object
    from_hom_witness: object
    hom_pool: object    # MorCarrier on the hom side
    findings: list = field(default_factory=list)


def duality_direct_to_inverse(s, fixed, pools, lim=None):
    """Compatible choices of morphisms into the fixed space correspond to
    morphisms out of the direct limit, two-sidedly and topologically."""
    induced, carriers_mc = induce_spectrum(s, fixed, "A_i", pools)
    inv = inverse_limit(induced)
    if lim is None:
        lim = direct_limit(s)
    findings = []

    # forward: a compatible choice acts classwise on the limit
    hom_witnesses, hom_tokens = [], []
    for tok in inv.carrier.elements:
        assignment = inv.assignments[tok]
        table = {}
        for cls_tok in lim.carrier.elements:
            i, x = split_tag(cls_tok)
            table[cls_tok] = carriers_mc[i].witness(assignment[i]).h(x)
        h = make_fn(lim.carrier, fixed.carrier, table)
        certs = {}
        for k, f0 in enumerate(fixed.gens):
            thread_funcs = {
                i: compose_rfun(f0, carriers_mc[i].witness(assignment[i]).h)
                for i in s.index.elements
            }
            pulled = thread_to_sum_function(s, Thread(thread_funcs), lim.carrier)
            pos = gen_position(lim.space, pulled)
            cert = CGen(pos) if pos is not None else certificate_for(
                lim.space, pulled)
            if cert is None:
                findings.append(Finding("hom-cert", (tok, k)))
                cert = CGen(0)
            certs[k] = cert
        hom_witnesses.append(MorphismWitness(h, certs))
        hom_tokens.append(tok)
    if findings:
        return DualityResult(None, None, None, None, None, findings)
    hom_pool = make_mor_carrier(lim.space, fixed, hom_witnesses,
                                names=[f"h[{t}]" for t in hom_tokens])
    to_hom = make_fn(inv.carrier, hom_pool.setoid,
                     dict(zip(hom_tokens, hom_pool.setoid.elements)))

    # backward: compose with the class maps of the limit
    legs = limit_legs_cocone(lim).legs
    back_table = {}
    for name in hom_pool.setoid.elements:
        w = hom_pool.witness(name)
        assignment = {}
        for i in s.index.elements:
            comp = compose(legs[i].h, w.h)
            found = carriers_mc[i].find(comp)
            if found is None:
                raise PoolNotClosed(
                    f"composite with the class map at {i} leaves the pool")
            assignment[i] = found
        tok = inv.token_of(assignment)
        if tok is None:
            findings.append(Finding("from-hom-compat", (name,)))
            continue
        back_table[name] = tok
    if findings:
        return DualityResult(None, None, None, None, hom_pool, findings)
    from_hom = make_fn(hom_pool.setoid, inv.carrier, back_table)

    for tok in inv.carrier.elements:
        if not inv.carrier.eq(from_hom(to_hom(tok)), tok):
            findings.append(Finding("round-trip", (tok,)))
    for name in hom_pool.setoid.elements:
        if not hom_pool.setoid.eq(to_hom(from_hom(name)), name):
            findings.append(Finding("round-trip-hom", (name,)))
    ok, witness = is_embedding(to_hom)
    if not ok:
        findings.append(Finding("embedding", witness))

    # forward is a morphism: evaluation at a class and a fixed generator
    # pulls back to evaluation at a representative behind a projection
    to_certs = {}
    for k, g in enumerate(hom_pool.space.gens):
        pulled = compose_rfun(g, to_hom)
        pos = gen_position(inv.space, pulled)
        to_certs[k] = CGen(pos) if pos is not None else certificate_for(
            inv.space, pulled)
        if to_certs[k] is None:
            findings.append(Finding("to-hom-cert", (k,)))
    from_certs = {}
    for k, g in enumerate(inv.space.gens):
        pulled = compose_rfun(g, from_hom)
        pos = gen_position(hom_pool.space, pulled)
        from_certs[k] = CGen(pos) if pos is not None else certificate_for(
            hom_pool.space, pulled)
        if from_certs[k] is None:
            findings.append(Finding("from-hom-cert", (k,)))
    to_w = MorphismWitness(to_hom, to_certs)
    from_w = MorphismWitness(from_hom, from_certs)
    if not findings:
        for f in check_morphism(inv.space, hom_pool.space, to_w):
            findings.append(Finding("to-hom-" + f.law, f.witness, f.note))
        for f in check_morphism(hom_pool.space, inv.space, from_w):
            findings.append(Finding("from-hom-" + f.law, f.witness, f.note))
    return DualityResult(to_hom, from_hom, to_w, from_w, hom_pool, findings)


# --- second duality: hom into an inverse limit --------------------------------

def duality_inverse_hom(s, fixed, pools, lim=None):
    """Compatible choices of morphisms out of the fixed space correspond to
    morphisms into the inverse limit."""
    induced, carriers_mc = induce_spectrum(s, fixed, "B_ii", pools)
    inv_mor = inverse_limit(induced)
    if lim is None:
        lim = inverse_limit(s)
    findings = []

    hom_witnesses, hom_tokens = [], []
    for tok in inv_mor.carrier.elements:
        assignment = inv_mor.assignments[tok]
        table = {}
        for x in fixed.carrier.elements:
            target = {i: carriers_mc[i].witness(assignment[i]).h(x)
                      for i in s.index.elements}
            target_tok = lim.token_of(target)
            if target_tok is None:
                findings.append(Finding("pointwise-compat", (tok, x)))
                break
            table[x] = target_tok
        if findings:
            return DualityResult(None, None, None, None, None, findings)
        h = make_fn(fixed.carrier, lim.carrier, table)
        certs = {}
        for k, g in enumerate(lim.space.gens):
            i, pos = lim.gen_sources[k]
            pulled = compose_rfun(g, h)
            component = carriers_mc[i].witness(assignment[i])
            expected = compose_rfun(s.space(i).gens[pos], component.h)
            if expected.values == pulled.values:
                certs[k] = component.certs[pos]
            else:
                cert = certificate_for(fixed, pulled)
                if cert is None:
                    findings.append(Finding("hom-cert", (tok, k)))
                    cert = CGen(0)
                certs[k] = cert
        hom_witnesses.append(MorphismWitness(h, certs))
        hom_tokens.append(tok)
    if findings:
        return DualityResult(None, None, None, None, None, findings)
    hom_pool = make_mor_carrier(fixed, lim.space, hom_witnesses,
                                names=[f"h[{t}]" for t in hom_tokens])
    to_hom = make_fn(inv_mor.carrier, hom_pool.setoid,
                     dict(zip(hom_tokens, hom_pool.setoid.elements)))

    back_table = {}
    for name in hom_pool.setoid.elements:
        w = hom_pool.witness(name)
        assignment = {}
        for i in s.index.elements:
            component = make_fn(
                fixed.carrier, s.fam.carrier(i),
                {x: lim.assignments[w.h(x)][i] for x in fixed.carrier.elements})
            found = carriers_mc[i].find(component)
            if found is None:
                raise PoolNotClosed(
                    f"component at {i} of {name} leaves the pool")
            assignment[i] = found
        tok = inv_mor.token_of(assignment)
        if tok is None:
            findings.append(Finding("from-hom-compat", (name,)))
            continue
        back_table[name] = tok
    if findings:
        return DualityResult(None, None, None, None, hom_pool, findings)
    from_hom = make_fn(hom_pool.setoid, inv_mor.carrier, back_table)

    for tok in inv_mor.carrier.elements:
        if not inv_mor.carrier.eq(from_hom(to_hom(tok)), tok):
            findings.append(Finding("round-trip", (tok,)))
    for name in hom_pool.setoid.elements:
        if not hom_pool.setoid.eq(to_hom(from_hom(name)), name):
            findings.append(Finding("round-trip-hom", (name,)))
    ok, witness = is_embedding(to_hom)
    if not ok:
        findings.append(Finding("embedding", witness))

    to_certs = {}
    for k, g in enumerate(hom_pool.space.gens):
        pulled = compose_rfun(g, to_hom)
        pos = gen_position(inv_mor.space, pulled)
        to_certs[k] = CGen(pos) if pos is not None else certificate_for(
            inv_mor.space, pulled)
        if to_certs[k] is None:
            findings.append(Finding("to-hom-cert", (k,)))
    from_certs = {}
    for k, g in enumerate(inv_mor.space.gens):
        pulled = compose_rfun(g, from_hom)
        pos = gen_position(hom_pool.space, pulled)
        from_certs[k] = CGen(pos) if pos is not None else certificate_for(
            hom_pool.space, pulled)
        if from_certs[k] is None:
            findings.append(Finding("from-hom-cert", (k,)))
    to_w = MorphismWitness(to_hom, to_certs)
    from_w = MorphismWitness(from_hom, from_certs)
    if not findings:
        for f in check_morphism(inv_mor.space, hom_pool.space, to_w):
            findings.append(Finding("to-hom-" + f.law, f.witness, f.note))
        for f in check_morphism(hom_pool.space, inv_mor.space, from_w):
            findings.append(Finding("from-hom-" + f.law, f.witness, f.note))
    return DualityResult(to_hom, from_hom, to_w, from_w, hom_pool, findings)


# --- converse-direction maps ---------------------------------------------------

@dataclass
class ConverseResult:
    to_hom: object
    witness: object
    hom_pool: object
    hypothesis_holds: bool | None = None
    hypothesis_witness: tuple = ()
    embedding_checked: bool = False
    findings: list = field(default_factory=list)


def converse_dual_inverse(s, fixed, pools):
    """From the direct limit of hom-into-fixed carriers over a contravariant
    spectrum to morphisms out of its inverse limit; an embedding exactly
    when every element extends to a compatible choice."""
    induced, carriers_mc = induce_spectrum(s, fixed, "B_i", pools)
    lim_mor = direct_limit(induced)
    inv = inverse_limit(s)
    findings = []

    hom_witnesses, class_tokens = [], []
    reps = lim_mor.repr_classes()
    for cls_tok in reps:
        i, name = split_tag(cls_tok)
        w = carriers_mc[i].witness(name)
        table = {tok: w.h(inv.assignments[tok][i]) for tok in inv.carrier.elements}
        h = make_fn(inv.carrier, fixed.carrier, table)
        certs = {}
        for k, f0 in enumerate(fixed.gens):
            pulled = compose_rfun(f0, h)
            pos = gen_position(inv.space, pulled)
            cert = CGen(pos) if pos is not None else certificate_for(
                inv.space, pulled)
            if cert is None:
                findings.append(Finding("hom-cert", (cls_tok, k)))
                cert = CGen(0)
            certs[k] = cert
        hom_witnesses.append(MorphismWitness(h, certs))
        class_tokens.append(cls_tok)
    if findings:
        return ConverseResult(None, None, None, findings=findings)
    hom_pool = make_mor_carrier(inv.space, fixed, hom_witnesses,
                                names=[f"h[{t}]" for t in class_tokens])
    # the classwise map must be constant on classes of the direct limit
    rep_of = {t: hom_pool.setoid.elements[n] for n, t in enumerate(class_tokens)}
    table = {}
    for tok in lim_mor.carrier.elements:
        rep = lim_mor.carrier.class_repr(tok)
        table[tok] = rep_of[rep]
    to_hom = make_fn(lim_mor.carrier, hom_pool.setoid, table)
    ok, wit = check_extensional(to_hom)
    if not ok:
        findings.append(Finding("classwise", wit))

    certs = {}
    for k, g in enumerate(hom_pool.space.gens):
        pulled = compose_rfun(g, to_hom)
        pos = gen_position(lim_mor.space, pulled)
        certs[k] = CGen(pos) if pos is not None else certificate_for(
            lim_mor.space, pulled)
        if certs[k] is None:
            findings.append(Finding("to-hom-cert", (k,)))
    witness = MorphismWitness(to_hom, certs)
    if not findings:
        for f in check_morphism(lim_mor.space, hom_pool.space, witness):
            findings.append(Finding("to-hom-" + f.law, f.witness, f.note))

    hypothesis_holds = True
    hypothesis_witness = ()
    for j in s.index.elements:
        for y in s.fam.carrier(j).elements:
            if not any(s.fam.carrier(j).eq(inv.assignments[tok][j], y)
                       for tok in inv.carrier.elements):
                hypothesis_holds = False
                hypothesis_witness = (j, y)
                break
        if not hypothesis_holds:
            break
    embedding_checked = False
    if hypothesis_holds and not findings:
        ok, wit = is_embedding(to_hom)
        if not ok:
            findings.append(Finding("embedding", wit))
        embedding_checked = True
    return ConverseResult(to_hom, witness, hom_pool, hypothesis_holds,
                          hypothesis_witness, embedding_checked, findings)


def converse_dual_direct(s, fixed, pools):
    """From the direct limit of hom-out-of-fixed carriers over a covariant
    spectrum to morphisms into its direct limit; morphism property only."""
    induced, carriers_mc = induce_spectrum(s, fixed, "A_ii", pools)
    lim_mor = direct_limit(induced)
    lim = direct_limit(s)
    findings = []

    hom_witnesses, class_tokens = [], []
    for cls_tok in lim_mor.repr_classes():
        i, name = split_tag(cls_tok)
        w = carriers_mc[i].witness(name)
        table = {x: tag_token(i, w.h(x)) for x in fixed.carrier.elements}
        h = make_fn(fixed.carrier, lim.carrier, table)
        certs = {}
        for k, g in enumerate(lim.space.gens):
            thread = lim.threads[_thread_position(lim, k)]
            certs[k] = lift_certificate(fixed, w, thread.certs[i])
        hom_witnesses.append(MorphismWitness(h, certs))
        class_tokens.append(cls_tok)
    hom_pool = make_mor_carrier(fixed, lim.space, hom_witnesses,
                                names=[f"h[{t}]" for t in class_tokens])
    rep_of = {t: hom_pool.setoid.elements[n] for n, t in enumerate(class_tokens)}
    table = {}
    for tok in lim_mor.carrier.elements:
        table[tok] = rep_of[lim_mor.carrier.class_repr(tok)]
    to_hom = make_fn(lim_mor.carrier, hom_pool.setoid, table)
    ok, wit = check_extensional(to_hom)
    if not ok:
        findings.append(Finding("classwise", wit))

    certs = {}
    for k, g in enumerate(hom_pool.space.gens):
        pulled = compose_rfun(g, to_hom)
        pos = gen_position(lim_mor.space, pulled)
        certs[k] = CGen(pos) if pos is not None else certificate_for(
            lim_mor.space, pulled)
        if certs[k] is None:
            findings.append(Finding("to-hom-cert", (k,)))
    witness = MorphismWitness(to_hom, certs)
    if not findings:
        for f in check_morphism(lim_mor.space, hom_pool.space, witness):
            findings.append(Finding("to-hom-" + f.law, f.witness, f.note))
    return ConverseResult(to_hom, witness, hom_pool, findings=findings)


def _thread_position(lim, gen_index):
    """Thread whose limit function is the given subbase generator."""
    g = lim.space.gens[gen_index]
    for n, t in enumerate(lim.threads):
        fn = thread_to_sum_function(lim.spectrum, t, lim.carrier)
        if fn.values == g.values:
            return n
    raise DualityError("generator without a generating thread")
