"""Independent reference implementations used only by the tests."""

from hopfsep.scalar import QQ_FIELD


def reduce_word(word, square, anti, one=1):
    """Normal form of a product of generators by adjacent swaps.

    ``square(i)`` is X_i^2 and ``anti(i, j)`` is X_i X_j + X_j X_i (i < j).
    Returns {sorted tuple of distinct generators: coefficient}.
    """
    todo = {tuple(word): one}
    done: dict = {}
    while todo:
        w, c = todo.popitem()
        for pos in range(len(w) - 1):
            a, b = w[pos], w[pos + 1]
            if a == b:
                _add(todo, w[:pos] + w[pos + 2:], c * square(a))
                break
            if a > b:
                _add(todo, w[:pos] + (b, a) + w[pos + 2:], -c)
                _add(todo, w[:pos] + w[pos + 2:], c * anti(b, a))
                break
        else:
            _add(done, w, c)
    return {w: c for w, c in done.items() if c}


def _add(d, k, v):
    if not v:
        return
    s = d.get(k, 0) + v
    if s:
        d[k] = s
    else:
        d.pop(k, None)


def word_of(mask):
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def mask_of_word(w):
    m = 0
    for i in w:
        m |= 1 << i
    return m


def clifford_product_oracle(params, r, s):
    """X_R X_S by rewriting the concatenated word, with X_0 = G."""
    p = params
    one = p.field.one

    def square(i):
        return p.alpha if i == 0 else p.beta[i]

    def anti(i, j):
        return p.gamma[j] if i == 0 else p.lam[(i, j)]

    out = reduce_word(word_of(r) + word_of(s), square, anti, one)
    return {mask_of_word(w): c for w, c in out.items()}


def en_product_oracle(r, s):
    """E(n) product via rewriting: g^2 = 1, x_i^2 = 0, all generators anticommute."""
    out = reduce_word(
        word_of(r) + word_of(s),
        lambda i: 1 if i == 0 else 0,
        lambda i, j: 0,
        QQ_FIELD.one,
    )
    return {mask_of_word(w): c for w, c in out.items()}


def composed_derivation(A, P, a):
    """d_{i_1} o ... o d_{i_s} applied literally, largest index first."""
    from hopfsep.clifford import d_single

    for i in sorted(P, reverse=True):
        a = d_single(A, i, a)
    return a
