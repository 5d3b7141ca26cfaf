"""Reference values for the unit tests, from parabolic cylinder functions.

u_n(x, k) = c D_nu(sqrt(2) (x - k)) with D_nu(-sqrt(2) k) = 0 and lambda = 2 nu + 1.
Run with mpmath installed; the printed numbers are pasted into tests/unit.
"""
import mpmath as mp

mp.mp.dps = 30


def nu_roots(k, count):
    f = lambda nu: mp.pcfd(nu, -mp.sqrt(2) * k)
    roots, x = [], mp.mpf(-0.49) if k <= 0 else mp.mpf(0)
    fx, step = f(x), mp.mpf("0.005")
    while len(roots) < count:
        y = x + step
        fy = f(y)
        if fx * fy < 0:
            roots.append(mp.findroot(f, (x, y), solver="anderson"))
        x, fx = y, fy
    return roots


def band(n, k):
    return 2 * nu_roots(k, n)[n - 1] + 1


def band_derivative(n, k):
    guess = (band(n, k) - 1) / 2
    g = lambda t: 2 * mp.findroot(lambda nu: mp.pcfd(nu, -mp.sqrt(2) * t), guess) + 1
    return mp.diff(g, k)


def eigenfunction(n, k):
    nu = nu_roots(k, n)[n - 1]
    raw = lambda x: mp.pcfd(nu, mp.sqrt(2) * (x - k))
    norm = mp.sqrt(mp.quad(lambda x: raw(x) ** 2, [0, max(k, 0), max(k, 0) + 12, mp.inf]))
    sign = 1 if raw(mp.mpf("1e-6")) > 0 else -1
    return lambda x: sign * raw(x) / norm


if __name__ == "__main__":
    for k in [-3, -2, -1, 0, 1, 2, 3]:
        print(f"lambda_1({k}) = {mp.nstr(band(1, k), 17)}")
    print(f"lambda_2(0) = {mp.nstr(band(2, 0), 17)}")
    print(f"lambda_2(-1) = {mp.nstr(band(2, -1), 17)}")
    for k in [3, 4]:
        print(f"lambda_1({k}) - 1 = {mp.nstr(band(1, k) - 1, 17)}")
    for k in [-1, 0, 1]:
        print(f"lambda_1'({k}) = {mp.nstr(band_derivative(1, k), 17)}")
    u0, u3 = eigenfunction(1, 0), eigenfunction(1, 3)
    print(f"F(0,3) = {mp.nstr(mp.quad(lambda x: u0(x) * u3(x), [0, 1.5, 3, 8, mp.inf]), 17)}")
    u1 = eigenfunction(1, 1)
    print(f"F(0,1) = {mp.nstr(mp.quad(lambda x: u0(x) * u1(x), [0, 1, 8, mp.inf]), 17)}")
