"""Dense reference scorer used to cross-check the sparse engine.

Deliberately naive and independent of the package internals: dense arrays,
triple loops, plain float arithmetic.
"""


def dense_scores(n_d, n_s, n_i, weights, confirmed):
    """Compute (agreement, likelihood) the brute-force way.

    weights: {(d, s, i): number}, confirmed: iterable of (s, i) pairs.
    likelihood is None when the total excitation is not positive.
    """
    W = [[[0.0] * (n_i + 1) for _ in range(n_s + 1)] for _ in range(n_d + 1)]
    for (d, s, i), w in weights.items():
        W[d][s][i] = float(w)
    R = [[0.0] * (n_i + 1) for _ in range(n_s + 1)]
    for s, i in confirmed:
        R[s][i] = 1.0

    agreement = {}
    for d in range(1, n_d + 1):
        total_positive = 0.0
        for s in range(1, n_s + 1):
            for i in range(1, n_i + 1):
                if W[d][s][i] > 0.0:
                    total_positive += W[d][s][i]
        acc = 0.0
        for s in range(1, n_s + 1):
            for i in range(1, n_i + 1):
                acc += (W[d][s][i] / total_positive) * R[s][i]
        agreement[d] = acc

    total = sum(agreement.values())
    if total <= 1e-9:
        likelihood = None
    else:
        likelihood = {d: agreement[d] / total for d in agreement}
    return agreement, likelihood
