"""Pure-Python backoff scoring kernel.

Fallback used when the compiled extension is unavailable. Both kernels must
perform the same float additions in the same order so their results agree
bit for bit.
"""

from __future__ import annotations


def score_padded(tokens, order, probs10, bows10, emis10, emission):
    """Sum log10 probabilities of positions order-1 .. end of a padded tuple.

    Every scored token must have a unigram entry in ``probs10``; the caller
    maps out-of-vocabulary tokens to the unknown tag first.
    """
    total = 0.0
    for i in range(order - 1, len(tokens)):
        acc = 0.0
        start = i - order + 1
        while True:
            gram = tokens[start : i + 1]
            prob = probs10.get(gram)
            if prob is not None:
                total += acc + prob
                break
            if start == i:
                # unigram miss: token outside the model vocabulary
                raise KeyError(tokens[i])
            bow = bows10.get(gram[:-1])
            if bow is not None:
                acc += bow
            start += 1
        if emission:
            emit = emis10.get(tokens[i])
            if emit is not None:
                total += emit
    return total
