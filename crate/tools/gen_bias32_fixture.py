#!/usr/bin/env python3
"""Regenerate fixtures/bias32.json.

Galois automorphisms of the degree-32 defining polynomial are computed with
PARI/GP (`nfgaloisconj`, via cypari2), which is independent of the Rust code
that consumes the fixture. The map to the 8-point permutation group
<(1 2)(3 4), (5 6 7 8), (1 5)(2 7)(3 6)(4 8)> is the lexicographically first
group isomorphism found by brute force over generator images.

    pip install cypari2
    python3 tools/gen_bias32_fixture.py > fixtures/bias32.json
"""
import hashlib
import itertools
import json

import cypari2

POLY = ("x^32 - 128*x^30 + 5680*x^28 - 120576*x^26 + 1386352*x^24 - 9267712*x^22"
        " + 38233408*x^20 - 101305344*x^18 + 176213088*x^16 - 202610688*x^14"
        " + 152933632*x^12 - 74141696*x^10 + 22181632*x^8 - 3858432*x^6"
        " + 363520*x^4 - 16384*x^2 + 256")
GROUP_GENS = ["(1 2)(3 4)", "(5 6 7 8)", "(1 5)(2 7)(3 6)(4 8)"]
SUB_GENS = ["(1 2)(3 4)", "(5 6 7 8)"]
C1, C2 = "(1 2)(3 4)", "(5 7)(6 8)"


def parse(s, deg=8):
    p = list(range(deg))
    for cyc in s.strip()[1:-1].split(")("):
        pts = [int(c) - 1 for c in cyc.split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            p[a] = b
    return tuple(p)


def fmt(p):
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        out.append("(" + " ".join(cyc) + ")")
    return "".join(out) or "()"


def compose(a, b):
    return tuple(a[b[x]] for x in range(len(a)))


def main():
    pari = cypari2.Pari()
    pari.allocatemem(1 << 30, silent=True)
    f = pari(POLY)
    auts = list(pari.nfgaloisconj(f))
    n = len(auts)
    key = {str(a): i for i, a in enumerate(auts)}
    # sigma_i o sigma_j corresponds to the polynomial g_j(g_i(x))
    comp = [[key[str(pari.lift(pari.subst(auts[j], "x", pari.Mod(auts[i], f))))]
             for j in range(n)] for i in range(n)]
    ident = key["x"]

    gens = [parse(g) for g in GROUP_GENS]
    e = tuple(range(8))
    words, order = {e: []}, [e]
    for g in order:
        for gi, h in enumerate(gens):
            y = compose(g, h)
            if y not in words:
                words[y] = words[g] + [gi]
                order.append(y)
    assert len(order) == n == 32

    iso = None
    for tr in itertools.product(range(n), repeat=len(gens)):
        img = {}
        for y in order:
            v = ident
            for gi in words[y]:
                v = comp[v][tr[gi]]
            img[y] = v
        if len(set(img.values())) != n:
            continue
        if all(img[compose(a, b)] == comp[img[a]][img[b]] for a in order for b in order):
            iso = img
            break
    assert iso is not None
    perm_of = {v: k for k, v in iso.items()}

    coeffs = [str(int(c)) for c in pari.Vecrev(f)]
    disc_primes = [int(p) for p in pari.factor(pari.poldisc(f))[0]]
    den_primes = set()
    for a in auts:
        d = int(pari.denominator(a))
        if d > 1:
            den_primes.update(int(p) for p in pari.factor(d)[0])
    excluded = sorted(set(disc_primes) | den_primes)

    doc = {
        "name": "bias32",
        "degree": n,
        "poly": coeffs,
        "automorphisms": [
            {
                "coeffs": [str(pari.numerator(c)) + "/" + str(pari.denominator(c))
                           for c in pari.Vecrev(pari.lift(a), n)],
                "perm": fmt(perm_of[i]),
            }
            for i, a in enumerate(auts)
        ],
        "group": {"degree": 8, "generators": GROUP_GENS},
        "subgroup_generators": SUB_GENS,
        "class1_rep": C1,
        "class2_rep": C2,
        "excluded_primes": excluded,
        "poly_checksum": hashlib.sha256(",".join(coeffs).encode()).hexdigest(),
    }
    print(json.dumps(doc, indent=2))


if __name__ == "__main__":
    main()
