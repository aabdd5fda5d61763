"""Brute-force reference implementations shared by the test modules.

Everything here recomputes results by direct enumeration or textbook DP,
independent of the package's algorithms.
"""

import itertools

import numpy as np

from figodenoise.channel import density_eval, gaussian_channel, induced_dmc, Quantizer
from figodenoise.denoise import stationary_distribution


def brute_smoothed_marginals(T, init, E):
    """Posterior marginals by looping over every source path."""
    n, M = E.shape
    marg = np.zeros((n, M))
    for path in itertools.product(range(M), repeat=n):
        p = init[path[0]] * E[0, path[0]]
        for t in range(1, n):
            p *= T[path[t - 1], path[t]] * E[t, path[t]]
        for t in range(n):
            marg[t, path[t]] += p
    return marg / marg.sum(axis=1, keepdims=True)


def brute_smoothed_marginals_tensor(T, init, E):
    """Same enumeration, but holding all M^n path probabilities in a tensor."""
    n, M = E.shape
    joint = init * E[0]
    for t in range(1, n):
        joint = joint[..., None] * (T * E[t])
    marg = np.empty((n, M))
    for t in range(n):
        axes = tuple(i for i in range(n) if i != t)
        marg[t] = joint.sum(axis=axes)
    return marg / marg.sum(axis=1, keepdims=True)


def brute_window_prior(T, init, width):
    """P(window tuple) for a chain started from init."""
    priors = {}
    for u in itertools.product(range(len(init)), repeat=width):
        p = init[u[0]]
        for a, b in zip(u[:-1], u[1:]):
            p *= T[a, b]
        priors[u] = p
    return priors


def brute_posterior_x0(T, init, channel, y_window, k):
    """P(X_0 | y_{-k..k}) by enumerating window tuples."""
    width = 2 * k + 1
    priors = brute_window_prior(T, init, width)
    M = len(init)
    post = np.zeros(M)
    for u, p in priors.items():
        for j in range(width):
            p *= density_eval(channel, u[j], y_window[j])
        post[u[k]] += p
    return post / post.sum()


def brute_z0_conditional(T, init, channel, q, y_window, k):
    """P(Z_0 | double-sided context) = sum_a P(X_0=a | context) Pi(a, z)."""
    width = 2 * k + 1
    priors = brute_window_prior(T, init, width)
    M = len(init)
    px0 = np.zeros(M)
    for u, p in priors.items():
        for j in range(width):
            if j == k:
                continue
            p *= density_eval(channel, u[j], y_window[j])
        px0[u[k]] += p
    px0 /= px0.sum()
    pi = induced_dmc(channel, q).pi
    return px0 @ pi


def random_hmp(rng, M):
    """Random chain + well-separated Gaussian channel + midpoint quantizer."""
    T = rng.dirichlet(np.ones(M) * 2.0, size=M)
    init = stationary_distribution(T)
    means = np.sort(rng.uniform(-3.0, 3.0, size=M))
    means += np.arange(M) * 1.0  # enforce separation
    std = rng.uniform(0.3, 0.8)
    channel = gaussian_channel(means, std)
    q = Quantizer((means[:-1] + means[1:]) / 2.0)
    return T, init, channel, q
