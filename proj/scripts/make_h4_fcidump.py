#!/usr/bin/env python3
"""Generate the linear H4 / STO-6G FCIDUMP fixture.

Builds one- and two-electron integrals over contracted s-type Gaussians with
closed-form formulas, runs RHF, Boys-localizes the four orbitals (ordered
along the chain), and writes an FCIDUMP file. A small determinant-space FCI
is run at the end as a sanity check of the produced integrals.

Usage: python3 scripts/make_h4_fcidump.py [--out tests/fixtures/h4_sto6g_2a0.fcidump]
"""

import argparse
import itertools
import math

import numpy as np
from scipy.special import erf

# STO-6G hydrogen 1s: exponents already scaled by zeta=1.24 (Hehre-Stewart-Pople).
STO6G_H_EXP = np.array(
    [35.52322122, 6.513143725, 1.822142904, 0.625955266, 0.243076747, 0.100112428]
)
STO6G_H_COEF = np.array(
    [0.00916359628, 0.04936149294, 0.16853830490, 0.37056279970, 0.41649152980, 0.13033408410]
)


def f0(t):
    """Boys function F0(t) = 0.5 * sqrt(pi/t) * erf(sqrt(t)), F0(0) = 1."""
    t = np.asarray(t, dtype=float)
    small = t < 1e-12
    safe = np.where(small, 1.0, t)
    out = 0.5 * np.sqrt(np.pi / safe) * erf(np.sqrt(safe))
    return np.where(small, 1.0 - t / 3.0, out)


class Shell:
    def __init__(self, center, exps, coefs):
        self.center = np.asarray(center, dtype=float)
        self.exps = exps
        # normalized primitive coefficients
        self.coefs = coefs * (2.0 * exps / np.pi) ** 0.75


def overlap(a, b):
    s = 0.0
    for ea, ca in zip(a.exps, a.coefs):
        for eb, cb in zip(b.exps, b.coefs):
            p = ea + eb
            mu = ea * eb / p
            r2 = np.dot(a.center - b.center, a.center - b.center)
            s += ca * cb * (np.pi / p) ** 1.5 * math.exp(-mu * r2)
    return s


def kinetic(a, b):
    s = 0.0
    for ea, ca in zip(a.exps, a.coefs):
        for eb, cb in zip(b.exps, b.coefs):
            p = ea + eb
            mu = ea * eb / p
            r2 = np.dot(a.center - b.center, a.center - b.center)
            s += ca * cb * mu * (3.0 - 2.0 * mu * r2) * (np.pi / p) ** 1.5 * math.exp(-mu * r2)
    return s


def nuclear(a, b, charges):
    s = 0.0
    for ea, ca in zip(a.exps, a.coefs):
        for eb, cb in zip(b.exps, b.coefs):
            p = ea + eb
            mu = ea * eb / p
            r2 = np.dot(a.center - b.center, a.center - b.center)
            pref = ca * cb * 2.0 * np.pi / p * math.exp(-mu * r2)
            pc = (ea * a.center + eb * b.center) / p
            for z, c in charges:
                s -= z * pref * float(f0(p * np.dot(pc - c, pc - c)))
    return s


def eri(a, b, c, d):
    s = 0.0
    rab2 = np.dot(a.center - b.center, a.center - b.center)
    rcd2 = np.dot(c.center - d.center, c.center - d.center)
    for ea, ca in zip(a.exps, a.coefs):
        for eb, cb in zip(b.exps, b.coefs):
            p = ea + eb
            pab = (ea * a.center + eb * b.center) / p
            kab = math.exp(-ea * eb / p * rab2)
            for ec, cc in zip(c.exps, c.coefs):
                for ed, cd_ in zip(d.exps, d.coefs):
                    q = ec + ed
                    pcd = (ec * c.center + ed * d.center) / q
                    kcd = math.exp(-ec * ed / q * rcd2)
                    t = p * q / (p + q) * np.dot(pab - pcd, pab - pcd)
                    s += (
                        ca * cb * cc * cd_
                        * 2.0 * np.pi ** 2.5 / (p * q * math.sqrt(p + q))
                        * kab * kcd * float(f0(t))
                    )
    return s


def rhf(S, Hcore, eri_ao, nelec, e_nuc, iters=200, tol=1e-12):
    n = S.shape[0]
    evals, evecs = np.linalg.eigh(S)
    X = evecs @ np.diag(evals ** -0.5) @ evecs.T
    dm = np.zeros((n, n))
    e_old = 0.0
    nocc = nelec // 2
    C = None
    for _ in range(iters):
        J = np.einsum("pqrs,rs->pq", eri_ao, dm)
        K = np.einsum("prqs,rs->pq", eri_ao, dm)
        F = Hcore + J - 0.5 * K
        Fp = X.T @ F @ X
        _, Cp = np.linalg.eigh(Fp)
        C = X @ Cp
        Cocc = C[:, :nocc]
        dm = 2.0 * Cocc @ Cocc.T
        e = 0.5 * np.sum(dm * (Hcore + F)) + e_nuc
        if abs(e - e_old) < tol:
            break
        e_old = e
    return e, C


def boys_localize(C, dip, iters=200):
    """Jacobi-sweep Boys localization over all columns of C."""
    C = C.copy()
    n = C.shape[1]
    for _ in range(iters):
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                rii = np.array([C[:, i] @ dip[k] @ C[:, i] for k in range(3)])
                rjj = np.array([C[:, j] @ dip[k] @ C[:, j] for k in range(3)])
                rij = np.array([C[:, i] @ dip[k] @ C[:, j] for k in range(3)])
                a = np.dot(rij, rij) - 0.25 * np.dot(rii - rjj, rii - rjj)
                b = np.dot(rij, rii - rjj)
                if abs(a) < 1e-14 and abs(b) < 1e-14:
                    continue
                theta = 0.25 * math.atan2(b, -a)
                if abs(theta) < 1e-10:
                    continue
                ci, cj = math.cos(theta), math.sin(theta)
                vi = ci * C[:, i] + cj * C[:, j]
                vj = -cj * C[:, i] + ci * C[:, j]
                C[:, i], C[:, j] = vi, vj
                changed = True
        if not changed:
            break
    return C


def order_and_fix_sign(C, dip_z, S):
    """Order localized orbitals by <z> and make the largest AO coefficient positive."""
    z = np.array([C[:, i] @ dip_z @ C[:, i] for i in range(C.shape[1])])
    order = np.argsort(z)
    C = C[:, order]
    for i in range(C.shape[1]):
        k = np.argmax(np.abs(C[:, i]))
        if C[k, i] < 0:
            C[:, i] = -C[:, i]
    return C


def fci_energy(h, g, e_core, norb, na, nb):
    """Small determinant-basis FCI, used only as an internal consistency check."""
    occs_a = list(itertools.combinations(range(norb), na))
    occs_b = list(itertools.combinations(range(norb), nb))
    dets = [(a, b) for a in occs_a for b in occs_b]
    index = {d: i for i, d in enumerate(dets)}
    dim = len(dets)

    def one_el(occ_i, occ_j):
        """Slater-Condon for a single spin string pair, same-spin excitation."""
        oi, oj = set(occ_i), set(occ_j)
        diff_i = sorted(oi - oj)
        diff_j = sorted(oj - oi)
        return diff_i, diff_j

    def parity(occ, p, q):
        lo, hi = min(p, q), max(p, q)
        occ_between = [x for x in occ if lo < x < hi]
        return -1.0 if len(occ_between) % 2 else 1.0

    H = np.zeros((dim, dim))
    for I, (oa, ob) in enumerate(dets):
        spin_occ = [(p, 0) for p in oa] + [(p, 1) for p in ob]
        e = e_core
        for (p, sp) in spin_occ:
            e += h[p, p]
        for (p, sp), (q, sq) in itertools.combinations(spin_occ, 2):
            e += g[p, p, q, q]
            if sp == sq:
                e -= g[p, q, q, p]
        H[I, I] = e
        # singles and doubles
        for J in range(I + 1, dim):
            na_, nb_ = dets[J]
            da_i, da_j = one_el(oa, na_)
            db_i, db_j = one_el(ob, nb_)
            ndiff = len(da_i) + len(db_i)
            if ndiff > 2:
                continue
            val = 0.0
            if ndiff == 1:
                if da_i:
                    p, q, occ_same, occ_other = da_i[0], da_j[0], oa, ob
                else:
                    p, q, occ_same, occ_other = db_i[0], db_j[0], ob, oa
                v = h[p, q]
                for r in occ_same:
                    if r == p:
                        continue
                    v += g[p, q, r, r] - g[p, r, r, q]
                for r in occ_other:
                    v += g[p, q, r, r]
                val = v * parity(occ_same, p, q)
            elif len(da_i) == 1 and db_i:
                p, r = da_i[0], da_j[0]
                q, s = db_i[0], db_j[0]
                val = g[p, r, q, s] * parity(oa, p, r) * parity(ob, q, s)
            elif len(da_i) == 2:
                p, q = da_i
                r, s = da_j
                val = g[p, r, q, s] - g[p, s, q, r]
                # parity for double excitation within one spin string
                occ = list(oa)
                sign = 1.0
                for (x, y) in ((p, r), (q, s)):
                    sign *= parity(occ, x, y)
                    occ.remove(x)
                    occ.append(y)
                    occ.sort()
                val *= sign
            elif len(db_i) == 2:
                p, q = db_i
                r, s = db_j
                val = g[p, r, q, s] - g[p, s, q, r]
                occ = list(ob)
                sign = 1.0
                for (x, y) in ((p, r), (q, s)):
                    sign *= parity(occ, x, y)
                    occ.remove(x)
                    occ.append(y)
                    occ.sort()
                val *= sign
            H[I, J] = H[J, I] = val
    w = np.linalg.eigvalsh(H)
    return w[0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="tests/fixtures/h4_sto6g_2a0.fcidump")
    ap.add_argument("--spacing", type=float, default=2.0, help="H-H spacing in bohr")
    ap.add_argument("--no-localize", action="store_true")
    args = ap.parse_args()

    centers = [np.array([0.0, 0.0, args.spacing * k]) for k in range(4)]
    shells = [Shell(c, STO6G_H_EXP, STO6G_H_COEF) for c in centers]
    charges = [(1.0, c) for c in centers]
    n = 4

    S = np.array([[overlap(a, b) for b in shells] for a in shells])
    T = np.array([[kinetic(a, b) for b in shells] for a in shells])
    V = np.array([[nuclear(a, b, charges) for b in shells] for a in shells])
    Hcore = T + V

    g_ao = np.zeros((n, n, n, n))
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    g_ao[p, q, r, s] = eri(shells[p], shells[q], shells[r], shells[s])

    e_nuc = 0.0
    for (zi, ci), (zj, cj) in itertools.combinations(charges, 2):
        e_nuc += zi * zj / np.linalg.norm(ci - cj)

    e_rhf, C = rhf(S, Hcore, g_ao, nelec=4, e_nuc=e_nuc)
    print(f"RHF energy: {e_rhf:.8f} Ha")

    if not args.no_localize:
        # dipole matrices over AOs; s-type pairs: <a|r|b> = P * S_ab
        dip = np.zeros((3, n, n))
        for p in range(n):
            for q in range(n):
                for ea, ca in zip(shells[p].exps, shells[p].coefs):
                    for eb, cb in zip(shells[q].exps, shells[q].coefs):
                        pp = ea + eb
                        mu = ea * eb / pp
                        r2 = np.dot(shells[p].center - shells[q].center,
                                    shells[p].center - shells[q].center)
                        s_prim = (np.pi / pp) ** 1.5 * math.exp(-mu * r2)
                        ctr = (ea * shells[p].center + eb * shells[q].center) / pp
                        dip[:, p, q] += ca * cb * s_prim * ctr
        C = boys_localize(C, dip)
        C = order_and_fix_sign(C, dip[2], S)

    h_mo = C.T @ Hcore @ C
    g_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", g_ao, C, C, C, C, optimize=True)

    e_fci = fci_energy(h_mo, g_mo, e_nuc, n, 2, 2)
    print(f"FCI energy (check): {e_fci:.6f} Ha")

    lines = [" &FCI NORB=4,NELEC=4,MS2=0,", "  ORBSYM=1,1,1,1,", "  ISYM=1,", " &END"]
    seen = set()
    for p in range(n):
        for q in range(n):
            for r in range(n):
                for s in range(n):
                    key = tuple(sorted([tuple(sorted((p, q))), tuple(sorted((r, s)))]))
                    if key in seen:
                        continue
                    seen.add(key)
                    val = g_mo[p, q, r, s]
                    if abs(val) > 1e-14:
                        lines.append(f"{val:23.16E} {p+1:3d} {q+1:3d} {r+1:3d} {s+1:3d}")
    for p in range(n):
        for q in range(p + 1):
            if abs(h_mo[p, q]) > 1e-14:
                lines.append(f"{h_mo[p, q]:23.16E} {p+1:3d} {q+1:3d}   0   0")
    lines.append(f"{e_nuc:23.16E}   0   0   0   0")

    with open(args.out, "w") as f:
        f.write("\n".join(lines) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
