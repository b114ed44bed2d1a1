"""
Split kernels: Markov kernels equipped with an l-step minorization
P^l(x, .) >= h(x) Q(.).

A kernel generates the split chain block by block. At every point of the
l-skeleton grid the bell delta ~ Bernoulli(h(x)) is drawn first; the next
l states then come from

    delta = 1: endpoint ~ Q,                 intermediates from the bridge
    delta = 0: endpoint ~ R(x, .),           intermediates from the bridge

where R = (P^l - hQ) / (1 - h) is the residual kernel. The base class does
this by rejection over l-step paths drawn from P, which only needs the
ratio q(y) / p^l(x, y). The fixtures override `run` with exact samplers.
"""

import copy
from abc import ABC, abstractmethod
from typing import Callable, Optional, Tuple

import numpy as np
from scipy import special, stats

from models.chain import ChainSpec
from utils.errors import InputError, MinorizationError, UnsupportedOracleError

HFunction = Callable[[np.ndarray], float]
RunResult = Tuple[np.ndarray, np.ndarray, np.ndarray]

# Slack for r(x, y) = h(x) q(y) / p^l(x, y) exceeding 1 by rounding.
RATIO_SLACK = 1e-9


def _check_h(value: float, x) -> float:
    if not 0.0 <= value <= 1.0 or value != value:
        raise MinorizationError(f"h(x) = {value} outside [0, 1] at x = {x}")
    return value


class SplitKernel(ABC):
    """Markov kernel with an l-step minorization.

    Subclasses provide one step of P, the minorization pair (h, Q) and the
    density ratio q(y) / p^l(x, y). Every random draw goes through the
    generator passed in, so runs are reproducible from the seed.
    """

    lag: int = 1
    dim: int = 1

    def __init__(self, h: Optional[HFunction] = None):
        self._h_override = h

    @abstractmethod
    def sample_q(self, rng: np.random.Generator) -> np.ndarray:
        """Draw a state from the minorization measure Q."""

    @abstractmethod
    def base_h(self, x: np.ndarray) -> float:
        """Minorization function of the kernel itself."""

    @abstractmethod
    def advance(self, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """One step of P from x."""

    @abstractmethod
    def q_over_pl(self, x: np.ndarray, y: np.ndarray) -> float:
        """Density ratio q(y) / p^l(x, y)."""

    def h(self, x: np.ndarray) -> float:
        """Minorization function in use (an override replaces the kernel's own)."""
        override = getattr(self, '_h_override', None)
        value = override(x) if override is not None else self.base_h(x)
        return _check_h(float(value), x)

    def stationary_mean_h(self) -> float:
        """E_pi[h(X)], the bell rate on the l-skeleton."""
        raise UnsupportedOracleError(f"{type(self).__name__} has no analytic E_pi[h]")

    def block(self, x: np.ndarray, bell: bool, hx: float, rng: np.random.Generator) -> np.ndarray:
        """
        Draw X_{t+1..t+l} given X_t = x and the bell.

        Paths are proposed from P and accepted with probability
        r = h(x) q(y) / p^l(x, y) when the bell rang, 1 - r otherwise, so the
        accepted endpoint follows Q or R and the intermediate states follow
        the bridge.

        Raises:
            MinorizationError: If r exceeds 1, i.e. h(x) Q is not below P^l(x, .)
        """
        path = np.empty((self.lag, self.dim))
        while True:
            y = x
            for j in range(self.lag):
                y = self.advance(y, rng)
                path[j] = y
            r = hx * self.q_over_pl(x, y) if hx > 0.0 else 0.0
            if r > 1.0 + RATIO_SLACK:
                raise MinorizationError(
                    f"h(x) q(y) / p^l(x, y) = {r:.6g} > 1 at x = {x}, y = {y}"
                )
            u = rng.random()
            if (u < r) if bell else (u >= r):
                return path

    def run(self, n: int, rng: np.random.Generator) -> RunResult:
        """
        Simulate n states of the split chain started from X_1 ~ Q.

        Returns:
            Tuple of (states (n, d), bells (n,), from_q (n,))
        """
        lag = self.lag
        states = np.empty((n, self.dim))
        bells = np.zeros(n, dtype=np.int8)
        from_q = np.zeros(n, dtype=bool)

        x = np.atleast_1d(self.sample_q(rng)).astype(float)
        states[0] = x
        from_q[0] = True
        t = 0
        while t < n:
            hx = self.h(x)
            bell = rng.random() < hx
            bells[t] = bell
            remaining = n - 1 - t
            if remaining == 0:
                break
            path = self.block(x, bell, hx, rng)
            m = min(lag, remaining)
            states[t + 1:t + 1 + m] = path[:m]
            if bell and lag <= remaining:
                from_q[t + lag] = True
            x = path[-1]
            t += lag
        return states, bells, from_q


class TwoStateKernel(SplitKernel):
    """P = [[1-a, a], [b, 1-b]] on {0, 1} with an exact l-step split.

    Q = P^l(0, .) unless given, h(x) = h_scale * min_y P^l(x, y) / Q(y).
    """

    def __init__(self, a: float, b: float, lag: int = 1, h_scale: float = 1.0,
                 h: Optional[HFunction] = None, q: Optional[np.ndarray] = None):
        super().__init__(h)
        self.a = a
        self.b = b
        self.lag = lag
        self.P = np.array([[1.0 - a, a], [b, 1.0 - b]])
        self.powers = [np.linalg.matrix_power(self.P, m) for m in range(lag + 1)]
        Pl = self.powers[lag]

        if q is None:
            q = Pl[0]
        q = np.asarray(q, dtype=float)
        if q.shape != (2,) or (q < 0).any() or not np.isclose(q.sum(), 1.0):
            raise InputError(f"Q must be a probability vector on {{0, 1}}, got {q}")
        self.q = q

        if h is None:
            support = q > 0
            self.hvec = h_scale * np.array([(Pl[x, support] / q[support]).min() for x in (0, 1)])
            self.hvec = np.minimum(self.hvec, 1.0)
        else:
            self.hvec = np.array([_check_h(float(h(np.array([float(x)]))), x) for x in (0, 1)])

        residual = Pl - self.hvec[:, None] * q[None, :]
        if (residual < -1e-12).any():
            raise MinorizationError(
                f"h(x) Q(y) exceeds P^{lag}(x, y): h = {self.hvec}, Q = {q}"
            )
        residual = np.clip(residual, 0.0, None)
        self.R = np.empty_like(Pl)
        for x in (0, 1):
            mass = residual[x].sum()
            self.R[x] = residual[x] / mass if mass > 0 else q

    def sample_q(self, rng):
        return np.array([float(rng.random() < self.q[1])])

    def base_h(self, x):
        return float(self.hvec[int(x[0])])

    def h(self, x):
        return float(self.hvec[int(x[0])])

    def advance(self, x, rng):
        i = int(x[0])
        return np.array([float(rng.random() < self.P[i, 1])])

    def q_over_pl(self, x, y):
        i, j = int(x[0]), int(y[0])
        return float(self.q[j] / self.powers[self.lag][i, j])

    def stationary(self) -> np.ndarray:
        """Stationary distribution (b, a) / (a + b)."""
        return np.array([self.b, self.a]) / (self.a + self.b)

    def stationary_mean_h(self) -> float:
        return float(self.stationary() @ self.hvec)

    def _bridge_table(self) -> np.ndarray:
        """table[k, u, y] = Pr(next = 1 | current u, endpoint y, k steps left)."""
        table = np.zeros((self.lag + 1, 2, 2))
        for k in range(2, self.lag + 1):
            ahead = self.powers[k - 1]
            total = self.powers[k]
            for u in (0, 1):
                for y in (0, 1):
                    if total[u, y] > 0:
                        table[k, u, y] = self.P[u, 1] * ahead[1, y] / total[u, y]
        return table

    def run(self, n, rng):
        lag = self.lag
        grid = -(-n // lag)
        u_bell = rng.random(grid).tolist()
        u_end = rng.random(grid).tolist()
        u_bridge = rng.random((grid, max(lag - 1, 1))).tolist()
        h0, h1 = float(self.hvec[0]), float(self.hvec[1])
        q1 = float(self.q[1])
        r1 = (float(self.R[0, 1]), float(self.R[1, 1]))
        table = self._bridge_table()

        out = np.empty(n, dtype=np.int8)
        bells = np.zeros(n, dtype=np.int8)
        from_q = np.zeros(n, dtype=bool)
        x = 1 if rng.random() < q1 else 0
        out[0] = x
        from_q[0] = True
        t = 0
        g = 0
        while t < n:
            bell = u_bell[g] < (h1 if x else h0)
            if bell:
                bells[t] = 1
            remaining = n - 1 - t
            if remaining == 0:
                break
            y = 1 if u_end[g] < (q1 if bell else r1[x]) else 0
            u = x
            row = u_bridge[g]
            for j in range(1, lag):
                if t + j > n - 1:
                    break
                u = 1 if row[j - 1] < table[lag - j + 1, u, y] else 0
                out[t + j] = u
            if lag <= remaining:
                out[t + lag] = y
                if bell:
                    from_q[t + lag] = True
            x = y
            t += lag
            g += 1
        return out.astype(float)[:, None], bells, from_q


class AR1Kernel(SplitKernel):
    """X' = rho X + noise_sd N(0, 1) with a one-step small-set minorization.

    On C = [-c, c], P(x, .) >= eps Q(.) with eps = 2 Phi(-|rho| c / s) and
    q(y) proportional to phi((|y| + |rho| c) / s); h = h_scale eps 1_C.
    """

    lag = 1

    def __init__(self, rho: float, noise_sd: float, small_set: float = 1.0,
                 h_scale: float = 1.0, h: Optional[HFunction] = None):
        super().__init__(h)
        self.rho = rho
        self.noise_sd = noise_sd
        self.small_set = small_set
        self.h_scale = h_scale
        self.shift = abs(rho) * small_set
        self.eps = float(2.0 * special.ndtr(-self.shift / noise_sd))

    def sample_q(self, rng):
        return self._q_draws(1, rng)[:1]

    def _q_draws(self, size: int, rng) -> np.ndarray:
        """|Y| ~ N(-|rho| c, s^2) truncated to (0, inf), with a random sign."""
        s = self.noise_sd
        magnitude = stats.truncnorm.rvs(
            self.shift / s, np.inf, loc=-self.shift, scale=s, size=size, random_state=rng
        )
        signs = np.where(rng.random(size) < 0.5, -1.0, 1.0)
        return signs * magnitude

    def base_h(self, x):
        return self.h_scale * self.eps if abs(float(x[0])) <= self.small_set else 0.0

    def advance(self, x, rng):
        return np.array([self.rho * float(x[0]) + self.noise_sd * rng.standard_normal()])

    def q_over_pl(self, x, y):
        s2 = 2.0 * self.noise_sd ** 2
        xv, yv = float(x[0]), float(y[0])
        return float(np.exp(-((abs(yv) + self.shift) ** 2 - (yv - self.rho * xv) ** 2) / s2) / self.eps)

    def stationary_mean_h(self) -> float:
        if getattr(self, '_h_override', None) is not None:
            return super().stationary_mean_h()
        sd = self.noise_sd / np.sqrt(1.0 - self.rho ** 2)
        return float(self.h_scale * self.eps * (2.0 * special.ndtr(self.small_set / sd) - 1.0))

    def run(self, n, rng):
        rho, s, c = self.rho, self.noise_sd, self.small_set
        shift, s2 = self.shift, 2.0 * self.noise_sd ** 2
        noise = rng.standard_normal(n).tolist()
        u_bell = rng.random(n).tolist()
        u_acc = rng.random(n).tolist()
        pool = self._q_draws(max(16, n // 4), rng).tolist()
        pool_pos = 0

        out = np.empty(n)
        bells = np.zeros(n, dtype=np.int8)
        from_q = np.zeros(n, dtype=bool)
        x = float(self.sample_q(rng)[0])
        out[0] = x
        from_q[0] = True
        for t in range(n):
            hx = self.h(np.array([x])) if self._h_override is not None else (
                self.h_scale * self.eps if abs(x) <= c else 0.0
            )
            bell = u_bell[t] < hx
            if bell:
                bells[t] = 1
            if t == n - 1:
                break
            if bell:
                if pool_pos == len(pool):
                    pool = self._q_draws(max(16, n // 4), rng).tolist()
                    pool_pos = 0
                y = pool[pool_pos]
                pool_pos += 1
                from_q[t + 1] = True
            elif hx == 0.0:
                y = rho * x + s * noise[t]
            else:
                # residual kernel by rejection: accept with probability 1 - r
                y = rho * x + s * noise[t]
                u = u_acc[t]
                while True:
                    r = hx * np.exp(-((abs(y) + shift) ** 2 - (y - rho * x) ** 2) / s2) / self.eps
                    if r > 1.0 + RATIO_SLACK:
                        raise MinorizationError(f"h(x) q(y) / p(x, y) = {r:.6g} > 1 at x = {x}")
                    if u >= r:
                        break
                    y = rho * x + s * rng.standard_normal()
                    u = rng.random()
            out[t + 1] = y
            x = y
        return out[:, None], bells, from_q


def build_kernel(spec: ChainSpec, h: Optional[HFunction] = None,
                 q: Optional[np.ndarray] = None) -> SplitKernel:
    """
    Build the split kernel described by a ChainSpec.

    Args:
        spec: Chain configuration
        h: Optional minorization function replacing the kernel's own
        q: Optional minorization measure (two-state only, a probability vector)

    Returns:
        SplitKernel ready to run

    Raises:
        InputError: If q is given for a chain that cannot take it, or an
            explicit spec.lag disagrees with a generic kernel's lag
    """
    if spec.kind == 'two-state':
        return TwoStateKernel(spec.a, spec.b, lag=spec.lag, h_scale=spec.h_scale, h=h, q=q)
    if q is not None:
        raise InputError(f"a custom Q is only supported for two-state chains, not {spec.kind}")
    if spec.kind == 'ar1':
        return AR1Kernel(spec.rho, spec.noise_sd, spec.small_set, spec.h_scale, h=h)
    kernel = spec.kernel
    if 'lag' in spec.model_fields_set and spec.lag != kernel.lag:
        raise InputError(
            f"lag {spec.lag} does not match the generic kernel's lag {kernel.lag}"
        )
    if h is not None:
        # the caller's kernel keeps its own h
        kernel = copy.copy(kernel)
        kernel._h_override = h
    return kernel
