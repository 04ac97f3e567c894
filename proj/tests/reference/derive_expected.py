"""Independent numpy/scipy derivations of the frozen expected values used by
the C++ test suites. Run with `python3 derive_expected.py`; nothing here is
imported by the build."""
import itertools
import numpy as np
from scipy.optimize import minimize

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0, -1.0]).astype(complex)
PAULI = [I2, X, Y, Z]


def ket(*amps):
    v = np.array(amps, dtype=complex)
    return v / np.linalg.norm(v)


phi_p = ket(1, 0, 0, 1)
phi_m = ket(1, 0, 0, -1)
psi_p = ket(0, 1, 1, 0)
psi_m = ket(0, 1, -1, 0)
proj = lambda v: np.outer(v, v.conj())


def ptranspose_b(rho, da, db):
    r = rho.reshape(da, db, da, db)
    return r.transpose(0, 3, 2, 1).reshape(da * db, da * db)


def bfp(p):
    terms = [(phi_p, psi_m), (psi_p, psi_p), (psi_m, phi_m),
             (phi_m, psi_p), (phi_m, psi_m), (phi_m, phi_m)]
    rho = np.zeros((16, 16), dtype=complex)
    for ab, ab2 in terms:
        # order A, B, A', B' then permute to A, A', B, B'
        t = np.kron(proj(ab), proj(ab2)).reshape([2] * 8)
        t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(16, 16)
        rho += t / 6
    return (1 - p) * rho + p * np.eye(16) / 16


def family15():
    return [np.kron(PAULI[k], PAULI[l]) for k in range(4) for l in range(4)
            if (k, l) != (0, 0)]


def data_matrix(rho, fa, fb):
    da = fa[0].shape[0]
    ops_a = [np.eye(da)] + fa
    ops_b = [np.eye(fb[0].shape[0])] + fb
    return np.array([[np.trace(rho @ np.kron(a, b)).real for b in ops_b]
                     for a in ops_a])


print("== BFP")
r0 = bfp(0)
print("trace rho^2", np.trace(r0 @ r0).real)
print("PT min eig", np.linalg.eigvalsh(ptranspose_b(r0, 4, 4)).min())
for p in [0, 0.2, 0.39]:
    d = data_matrix(bfp(p), family15(), family15())
    print(p, abs(np.linalg.det(d)), ((1 - p) / 3) ** 15)

print("== Example states")
s3 = np.sqrt(3)
rho_sep = (np.kron(I2, I2) + 0.5 * (np.kron(X, X) + np.kron(Z, Z))) / 4
x1 = 1 + s3
x2 = 1 + x1
A = (X - x1 * I2) / x2
D = data_matrix(rho_sep, [A, Z], [A, Z])
print(D)
print("expected", 1 - s3, (15 - 8 * s3) / 2)
m, c = 1 - s3, (15 - 8 * s3) / 2
yv = 4 * s3 - 7
idx = {0: I2, 1: X, 2: Z}
rho_ent = yv * np.kron(Y, Y)
for i in range(3):
    for j in range(3):
        rho_ent = rho_ent + D[i, j] * np.kron(idx[i], idx[j])
rho_ent /= 4
print("rho_ent eig", np.linalg.eigvalsh(rho_ent))
print("rho_ent PT min", np.linalg.eigvalsh(ptranspose_b(rho_ent, 2, 2)).min())
print("rho_sep PT min", np.linalg.eigvalsh(ptranspose_b(rho_sep, 2, 2)).min())
lam = np.linalg.svd(D[1:, 1:], compute_uv=False)
print("sharp margin", np.sqrt(lam).sum() - np.sqrt(2), "svals full", np.linalg.svd(D, compute_uv=False))


print("== angle minimization brute force")


def lemma1_obj(al, be, l1, l2):
    a1, a2 = np.sqrt(2) * abs(np.cos(al)), np.sqrt(2) * abs(np.sin(al))
    b1, b2 = np.sqrt(2) * abs(np.cos(be)), np.sqrt(2) * abs(np.sin(be))
    t2 = 0.0 if l1 * l2 == 0 else 2 * l1 * l2 / (a1 * a2 * b1 * b2)
    return (l1 + l2) ** 2 / (a1 ** 2 * b1 ** 2 + a2 ** 2 * b2 ** 2) + t2


for l1, l2 in [(1, 1), (1, 0), (0.5718, 0.5), ((15 - 8 * s3) / 2, 0.5)]:
    g = np.linspace(1e-4, np.pi / 2 - 1e-4, 801)
    AL, BE = np.meshgrid(g, g)
    v = np.vectorize(lemma1_obj)(AL, BE, l1, l2)
    k = np.unravel_index(v.argmin(), v.shape)
    res = minimize(lambda q: lemma1_obj(q[0], q[1], l1, l2), [AL[k], BE[k]],
                   method="Nelder-Mead", options=dict(xatol=1e-12, fatol=1e-14))
    print(l1, l2, res.fun, 0.25 * (np.sqrt(l1) + np.sqrt(l2)) ** 4)

print("== Gram-Schmidt det")


def gs_det(fam):
    d = fam[0].shape[0]
    vs = [np.eye(d)] + fam
    ks, G = [], np.zeros((len(vs), len(vs)))
    for i, v in enumerate(vs):
        coef = np.zeros(len(vs)); coef[i] = 1
        r = v.astype(complex)
        for j, k in enumerate(ks):
            ov = np.trace(k @ v).real
            r = r - ov * k
            coef -= ov * G[j]
        nrm = np.sqrt(np.trace(r @ r).real)
        ks.append(r / nrm); G[i] = coef / nrm
    return abs(np.linalg.det(G))


print(gs_det([X, Z]), 2 ** -1.5)
print(gs_det([np.diag([1, 1, -1.0]), np.diag([1, -1, 1.0])]), np.sqrt(3) / 8)

print("== werner CHSH/det")
print(0.25 * (np.sqrt(0.7) + np.sqrt(0.4)) ** 4)
