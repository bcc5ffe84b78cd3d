#!/usr/bin/env python3
"""Regenerate fixtures/bias32_crosscheck.json from fixtures/bias32.json.

For 100 primes, PARI/GP computes (a) the G+-conjugacy class of Frobenius,
by factoring f mod p and matching x^p on one factor, and (b) the residue
degrees of the primes above p in K = L^G, using galoisfixedfield and
idealprimedec. None of this goes through the Rust code paths it checks.

    python3 tools/gen_bias32_crosscheck.py > fixtures/bias32_crosscheck.json
"""
import json
import pathlib

import cypari2

from gen_bias32_fixture import compose, fmt, parse

ROOT = pathlib.Path(__file__).resolve().parent.parent


def main():
    pari = cypari2.Pari()
    pari.allocatemem(1 << 30, silent=True)
    doc = json.loads((ROOT / "fixtures" / "bias32.json").read_text())
    x = pari("x")
    f = sum(int(c) * x**i for i, c in enumerate(doc["poly"]))
    auts = [sum(pari(c) * x**i for i, c in enumerate(a["coeffs"])) for a in doc["automorphisms"]]
    perms = [parse(a["perm"]) if a["perm"] != "()" else tuple(range(8)) for a in doc["automorphisms"]]
    group = list(set(perms))

    sub = {tuple(range(8))}
    frontier = [tuple(range(8))]
    sub_gens = [parse(g) for g in doc["subgroup_generators"]]
    while frontier:
        g = frontier.pop()
        for h in sub_gens:
            y = compose(g, h)
            if y not in sub:
                sub.add(y)
                frontier.append(y)

    gal = pari.galoisinit(f)
    sub_perms = []
    for el in gal[5]:  # gal.group
        pol = pari.galoispermtopol(gal, el)
        idx = [i for i, a in enumerate(auts) if a == pol]
        assert len(idx) == 1
        if perms[idx[0]] in sub:
            sub_perms.append(el)
    assert len(sub_perms) == len(sub)
    fixed = pari.galoisfixedfield(gal, pari.Vec(sub_perms), 1)
    nf = pari.nfinit(pari.polredbest(fixed))

    def canon_class(p):
        conj = []
        for a in group:
            ainv = [0] * 8
            for i, v in enumerate(a):
                ainv[v] = i
            conj.append(compose(compose(a, p), tuple(ainv)))
        return fmt(min(conj))

    excluded = set(doc["excluded_primes"])
    out = []
    p = 1009
    while len(out) < 100:
        if p not in excluded:
            fac = pari.factormod(f, p)[0]
            h = pari.lift(fac[0])
            xp = pari.lift(pari.Mod(pari.Mod(x, p), pari.Mod(h, p)) ** p)
            hits = [i for i, a in enumerate(auts)
                    if pari.lift(pari.Mod(pari.Mod(a, p), pari.Mod(h, p))) == xp]
            assert len(hits) == 1
            degs = sorted(int(pr[3]) for pr in pari.idealprimedec(nf, p))
            out.append({"p": p, "frobenius_class": canon_class(perms[hits[0]]),
                        "residue_degrees_in_k": degs})
        p = int(pari.nextprime(p + 9973))
    print(json.dumps({"field": doc["name"], "samples": out}, indent=1))


if __name__ == "__main__":
    main()
