#!/usr/bin/env python3
"""Regenerate the newform fixture file from PARI/GP (via cypari2).

One JSON record per Galois orbit of weight-2 newforms with trivial character.
Local types at bad primes:
  p || N                -> steinberg
  p odd, v_p(N) odd >= 3 -> minimal supercuspidal
  p odd, v_p(N) = 2     -> decided by searching for a twist of lower level
  anything else          -> unknown

usage: gen_fixtures.py OUT.jsonl [levels...]   (default: 1..130 plus 343)
"""
import json
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9, silent=True)
pari.set_real_precision(40)

AP_BOUND = 100
MATCH_BOUND = 60
TOL = 1e-12


def primes_upto(n):
    return [int(p) for p in pari.primes(pari.primepi(n))]


def vp(n, p):
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def letters(i):
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(97 + r) + s
    return s


def embeddings(space, form, bound):
    coefs = pari.mfcoefs(form, bound)
    emb = pari.mfembed(form, coefs)
    if emb[0].type() not in ("t_VEC", "t_COL"):
        return [[complex(c) for c in emb]]
    return [[complex(c) for c in e] for e in emb]


def newforms(level, char=None):
    key = [level, 2] if char is None else [level, 2, char]
    mf = pari.mfinit(key, 0)
    if int(pari.mfdim(mf)) == 0:
        return mf, []
    return mf, list(pari.mfeigenbasis(mf))


def twist_class(level, p, f_embs):
    """Return (kind, minimal) for p odd with p^2 || level."""
    G = pari.znstar(p, 1)
    order = p - 1
    good = [l for l in primes_upto(MATCH_BOUND) if level % l]
    for k in range(1, order):
        chi = [k]
        quadratic = (2 * k) % order == 0
        vals = {l: pari.exp(2 * pari.Pi() * pari.I() * pari.chareval(G, chi, l)) for l in good}
        vals = {l: complex(v) for l, v in vals.items()}
        targets = [(level // p, False)]
        if quadratic:
            targets.append((level // (p * p), True))
        for m, unram in targets:
            if m == 1 and unram:
                continue
            if quadratic:
                forms = newforms(m)[1]
            else:
                Gm = pari.znstar(m, 1)
                ch = pari.zncharinduce(G, pari.charpow(G, chi, -2), Gm)
                forms = newforms(m, [Gm, ch])[1]
            for g in forms:
                for ge in embeddings(None, g, MATCH_BOUND):
                    for fe in f_embs:
                        if all(abs(fe[l] * vals[l] - ge[l]) < 1e-8 for l in good):
                            if quadratic and not unram:
                                return "special-twist", False
                            return "principal-series", False
    return "supercuspidal", True


def charpoly_coeffs(c, dim):
    # low-to-high coefficients of the characteristic polynomial of c on the Hecke field
    if c.type() == "t_POLMOD":
        poly = pari.charpoly(c)
    else:
        poly = pari("(x - (%s))^%d" % (c, dim))
    return [int(poly.polcoef(i)) for i in range(dim + 1)]


def level_records(N):
    mf, forms = newforms(N)
    if not forms:
        return []
    fields = pari.mffields(mf)
    bad_primes = [int(p) for p in pari.factor(N)[0]]
    out = []
    for idx, F in enumerate(forms):
        dim = int(pari.poldegree(fields[idx]))
        coefs = pari.mfcoefs(F, AP_BOUND)
        ap, polys = {}, {}
        for p in primes_upto(AP_BOUND):
            c = coefs[p]
            if c.type() == "t_POLMOD":
                ap[str(p)] = int(pari.trace(c))
            else:
                ap[str(p)] = int(c) * dim
            polys[str(p)] = charpoly_coeffs(c, dim)
        f_embs = None
        bad = {}
        for p in bad_primes:
            e = vp(N, p)
            if e == 1:
                bad[str(p)] = {"c": 1, "kind": "steinberg", "minimal": True}
            elif p > 2 and e % 2 == 1:
                bad[str(p)] = {"c": e, "kind": "supercuspidal", "minimal": True}
            elif p > 2 and e == 2:
                if f_embs is None:
                    f_embs = embeddings(mf, F, MATCH_BOUND)
                kind, minimal = twist_class(N, p, f_embs)
                bad[str(p)] = {"c": 2, "kind": kind, "minimal": minimal}
            else:
                bad[str(p)] = {"kind": "unknown"}
        out.append({"level": N, "label": "%d%s" % (N, letters(idx)), "dim": dim,
                    "ap": ap, "bad": bad, "ap_polys": polys})
    return out


def main():
    path = sys.argv[1]
    levels = [int(a) for a in sys.argv[2:]] or list(range(1, 131)) + [343]
    with open(path, "w") as fh:
        for N in levels:
            for rec in level_records(N):
                fh.write(json.dumps(rec, separators=(", ", ": ")) + "\n")
            sys.stderr.write("level %d done\n" % N)


if __name__ == "__main__":
    main()
