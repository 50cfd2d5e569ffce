"""Regenerate the bundled reference dataset (src/mvaudit/fixtures/austria2016.csv).

The official per-district file of the 2016 runoff is not redistributed here.
Instead this script constructs a 117-district dataset that reproduces the
published aggregate figures exactly:

  * 103 accepted + 11 contested + 3 dubious districts,
  * 77,769 mail votes and 34,479 counted candidate-1 mail votes in the
    contested districts, reversal threshold 49,911,
  * official margin 30,863 for candidate 2,
  * reversal probabilities 1.322065e-10 (11 contested, 105 dof) and
    5.151422e-8 (14 contested, 102 dof).

Construction: draw a realistic district geometry from a fixed seed, force
the contested-district integer constants, then tune the accepted-side noise
scale, the contested ballot aggregate, and the dubious mail counts so both
tail probabilities land on target; a greedy +-1 integer descent finishes the
job, and ballot totals of accepted districts absorb the margin last (they
enter neither the regression nor the tail statistics).

Run from the repository root:  python3 scripts/build_fixture.py
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mvaudit.special import student_t_sf  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "src" / "mvaudit" / "fixtures" / "austria2016.csv"

SEED = 160522
N_TOTAL, N_RED, N_DUBIOUS = 117, 11, 3

RED_MAIL_TOTAL = 77_769
RED_MAIL_C1 = 34_479
OFFICIAL_MARGIN = 30_863
DEFICIT = math.ceil(OFFICIAL_MARGIN / 2)  # 15432
THRESHOLD_11 = RED_MAIL_C1 + DEFICIT  # 49911
P11_TARGET = 1.322065e-10
P14_TARGET = 5.151422e-8

K_TRUE = 0.185
SIGMA_TARGET = 7.4  # accepted-side noise scale the tuner drives the fit to


def solve_upper_t(p_target: float, dof: int) -> float:
    lo, hi = 0.0, 1.0
    while student_t_sf(hi, dof).value > p_target:
        lo, hi = hi, hi * 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if student_t_sf(mid, dof).value > p_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def largest_remainder(amount: int, weights: np.ndarray) -> np.ndarray:
    """Integer split of ``amount`` proportional to ``weights`` (exact sum)."""
    quotas = amount * weights / weights.sum()
    shares = np.floor(quotas).astype(int)
    for i in np.argsort(-(quotas - shares), kind="stable")[: amount - shares.sum()]:
        shares[i] += 1
    return shares


class State:
    """Mutable integer vote arrays plus the index partition."""

    def __init__(self, rng: np.random.Generator):
        b = np.round(rng.lognormal(math.log(36_000), 0.33, N_TOTAL)).astype(int)
        b = np.clip(b, 26_000, 100_000)
        rho = np.clip(rng.normal(0.215, 0.015, N_TOTAL), 0.19, 0.245)
        self.m = np.round(rho * b).astype(int)
        x = np.clip(rng.normal(0.510, 0.035, N_TOTAL), 0.44, 0.58)
        self.b = b
        self.vb = np.round(x * b).astype(int)
        noise = rng.normal(0.0, SIGMA_TARGET * np.sqrt(self.m), N_TOTAL)
        self.vm = np.clip(np.round(K_TRUE * self.vb + noise).astype(int), 0, self.m)

        # statuses: contested and dubious districts drawn from the mid-size band
        order = np.argsort(self.m, kind="stable")
        band = order[25:80]
        picks = rng.permutation(band)
        self.red_idx = np.sort(picks[:N_RED])
        self.dub_idx = np.sort(picks[N_RED : N_RED + N_DUBIOUS])
        self.status = np.array(["green"] * N_TOTAL, dtype=object)
        self.status[self.red_idx] = "red"
        self.status[self.dub_idx] = "dubious"
        self.pure_idx = np.where(self.status == "green")[0]

        # force the contested integer constants
        self.m[self.red_idx] = largest_remainder(RED_MAIL_TOTAL, self.m[self.red_idx].astype(float))
        self.vm[self.red_idx] = largest_remainder(
            RED_MAIL_C1, np.maximum(K_TRUE * self.vb[self.red_idx], 1.0)
        )
        self.vb[self.red_idx] = np.minimum(self.vb[self.red_idx], self.b[self.red_idx])

    def greens11(self):
        idx = np.sort(np.concatenate([self.pure_idx, self.dub_idx]))
        return self.vb[idx], self.vm[idx], self.m[idx]

    def greens14(self):
        idx = self.pure_idx
        return self.vb[idx], self.vm[idx], self.m[idx]


def fit(vb, vm, m):
    s_xx = float(np.sum(vb.astype(float) ** 2 / m))
    slope = float(np.sum(vb * vm / m.astype(float))) / s_xx
    rss = float(np.sum((vm - slope * vb) ** 2 / m))
    return slope, s_xx, rss


def tail_probs(st: State) -> tuple[float, float]:
    vb, vm, m = st.greens11()
    slope, s_xx, rss = fit(vb, vm, m)
    sigma2 = rss / 105
    red_vb = int(st.vb[st.red_idx].sum())
    sd = math.sqrt(sigma2 * (red_vb * red_vb / s_xx + RED_MAIL_TOTAL))
    p11 = student_t_sf((THRESHOLD_11 - slope * red_vb) / sd, 105).value

    vb, vm, m = st.greens14()
    slope, s_xx, rss = fit(vb, vm, m)
    sigma2 = rss / 102
    vb14 = red_vb + int(st.vb[st.dub_idx].sum())
    m14 = RED_MAIL_TOTAL + int(st.m[st.dub_idx].sum())
    thresh14 = RED_MAIL_C1 + int(st.vm[st.dub_idx].sum()) + DEFICIT
    sd = math.sqrt(sigma2 * (vb14 * vb14 / s_xx + m14))
    p14 = student_t_sf((thresh14 - slope * vb14) / sd, 102).value
    return p11, p14


def loss(st: State) -> float:
    p11, p14 = tail_probs(st)
    return max(abs(math.log(p11 / P11_TARGET)), abs(math.log(p14 / P14_TARGET)))


def coarse_tune(st: State, t11: float, t14: float) -> None:
    """Alternate between noise rescaling, contested ballot total, and dubious mail."""
    for _ in range(12):
        # drive the accepted-side noise scale to SIGMA_TARGET
        vb, vm, m = st.greens11()
        slope, s_xx, rss = fit(vb, vm, m)
        gamma = math.sqrt(SIGMA_TARGET**2 * 105 / rss)
        for i in np.concatenate([st.pure_idx, st.dub_idx]):
            resid = st.vm[i] - slope * st.vb[i]
            st.vm[i] = int(np.clip(round(slope * st.vb[i] + gamma * resid), 0, st.m[i]))
        vb, vm, m = st.greens11()
        slope, s_xx, rss = fit(vb, vm, m)
        sigma2 = rss / 105

        # contested ballot aggregate -> solve t11 exactly (monotone in the total)
        def t_of(total: float) -> float:
            sd = math.sqrt(sigma2 * (total * total / s_xx + RED_MAIL_TOTAL))
            return (THRESHOLD_11 - slope * total) / sd

        lo, hi = 1.0, (THRESHOLD_11 - 1.0) / slope
        for _ in range(300):
            mid = 0.5 * (lo + hi)
            if t_of(mid) > t11:
                lo = mid
            else:
                hi = mid
        red_target = int(round(0.5 * (lo + hi)))
        st.vb[st.red_idx] = largest_remainder(red_target, st.m[st.red_idx].astype(float))
        st.vb[st.red_idx] = np.minimum(st.vb[st.red_idx], st.b[st.red_idx])

        # dubious mail counts -> solve t14 given the refreshed accepted-side fit
        vb, vm, m = st.greens14()
        slope14, s_xx14, rss14 = fit(vb, vm, m)
        sigma2_14 = rss14 / 102
        red_vb = int(st.vb[st.red_idx].sum())
        vb14 = red_vb + int(st.vb[st.dub_idx].sum())
        m14 = RED_MAIL_TOTAL + int(st.m[st.dub_idx].sum())
        sd14 = math.sqrt(sigma2_14 * (vb14 * vb14 / s_xx14 + m14))
        dub_vm_target = t14 * sd14 + slope14 * vb14 - RED_MAIL_C1 - DEFICIT
        dub_vm_target = int(round(dub_vm_target))
        cap = int(st.m[st.dub_idx].sum())
        dub_vm_target = min(max(dub_vm_target, 0), cap)
        st.vm[st.dub_idx] = largest_remainder(dub_vm_target, st.m[st.dub_idx].astype(float))


def greedy_polish(st: State, tol: float = 1e-6, max_steps: int = 4000) -> float:
    """+-1 integer moves on green/dubious mail counts, green ballot counts,
    contested and dubious ballot counts, until both tails sit on target."""
    moves: list[tuple[str, int, int]] = []
    for i in st.pure_idx:
        moves += [("vm", i, +1), ("vm", i, -1), ("vb", i, +1), ("vb", i, -1)]
    for i in st.dub_idx:
        moves += [("vm", i, +1), ("vm", i, -1), ("vb", i, +1), ("vb", i, -1)]
    for i in st.red_idx:
        moves += [("vb", i, +1), ("vb", i, -1)]

    def allowed(field: str, i: int, delta: int) -> bool:
        arr = st.vm if field == "vm" else st.vb
        bound = st.m[i] if field == "vm" else st.b[i]
        new = arr[i] + delta
        return 0 <= new <= bound

    current = loss(st)
    for _ in range(max_steps):
        if current < tol:
            break
        best = None
        for field, i, delta in moves:
            if not allowed(field, i, delta):
                continue
            arr = st.vm if field == "vm" else st.vb
            arr[i] += delta
            candidate = loss(st)
            arr[i] -= delta
            if candidate < current - 1e-14 and (best is None or candidate < best[0]):
                best = (candidate, field, i, delta)
        if best is None:
            break
        current, field, i, delta = best
        (st.vm if field == "vm" else st.vb)[i] += delta
    return current


def fix_margin(st: State) -> None:
    """Adjust accepted-district ballot totals so candidate 2 leads by exactly
    the official margin; ballot totals enter neither fit nor tail."""
    margin = int((st.b - st.vb).sum() + (st.m - st.vm).sum() - st.vb.sum() - st.vm.sum())
    delta = OFFICIAL_MARGIN - margin
    idx = st.pure_idx[np.argsort(-st.b[st.pure_idx], kind="stable")][:60]
    sign = 1 if delta >= 0 else -1
    shares = largest_remainder(abs(delta), st.b[idx].astype(float))
    st.b[idx] += sign * shares
    assert np.all(st.b >= st.vb)


def main() -> None:
    t11 = solve_upper_t(P11_TARGET, 105)
    t14 = solve_upper_t(P14_TARGET, 102)
    print(f"target t-statistics: {t11:.9f} (105 dof), {t14:.9f} (102 dof)")

    rng = np.random.default_rng(SEED)
    st = State(rng)
    coarse_tune(st, t11, t14)
    print(f"after coarse tuning : loss = {loss(st):.3e}")
    final = greedy_polish(st)
    print(f"after integer polish: loss = {final:.3e}")
    assert final < 1e-5, "integer descent failed to reach the tail-probability targets"
    fix_margin(st)

    p11, p14 = tail_probs(st)
    print(f"p11 = {p11:.9e}  (target {P11_TARGET:.6e})")
    print(f"p14 = {p14:.9e}  (target {P14_TARGET:.6e})")

    # clamp-safety audit for the calibration defaults: expected clamped
    # fraction of district draws must sit far below the 0.1% reporting bound
    vb, vm, m = st.greens11()
    slope, s_xx, rss = fit(vb, vm, m)
    sigma = math.sqrt(rss / 105)
    mu = slope * st.vb
    z_lo = mu / (sigma * np.sqrt(st.m))
    z_hi = (st.m - mu) / (sigma * np.sqrt(st.m))
    phi = lambda z: 0.5 * math.erfc(z / math.sqrt(2.0))
    expected_clamped = float(np.mean([phi(a) + phi(b_) for a, b_ in zip(z_lo, z_hi)]))
    print(f"min clamp z-distance: {min(z_lo.min(), z_hi.min()):.2f} sigma, "
          f"expected clamp fraction {expected_clamped:.2e}")
    assert expected_clamped < 5e-5

    lines = ["district_id,name,ballot_total,ballot_c1,mail_total,mail_c1,status"]
    for i in range(N_TOTAL):
        lines.append(
            f"d{i + 1:03d},District {i + 1:03d},{st.b[i]},{st.vb[i]},"
            f"{st.m[i]},{st.vm[i]},{st.status[i]}"
        )
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({N_TOTAL} districts)")


if __name__ == "__main__":
    main()
