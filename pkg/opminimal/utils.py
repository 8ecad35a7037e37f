'''
Back-end functions used throughout the library: permutations of input
labels, Koszul signs, and size alerts.

Permutations are tuples in one-line notation, sigma = (sigma(1), ...,
sigma(n)), acting on input labels 1..n. Products are compositions of maps:
compose(sigma, tau)(j) = sigma(tau(j)).
'''
from itertools import permutations
from math import factorial
from warnings import warn


def identity_permutation(n:int):
    return tuple(range(1, n + 1))


def transposition(n:int, i:int):
    """ Returns the adjacent transposition (i, i+1) of Sigma_n """
    if not 1 <= i < n:
        raise ValueError(f"No adjacent transposition ({i}, {i+1}) in "
                         f"Sigma_{n}")
    sigma = list(range(1, n + 1))
    sigma[i - 1], sigma[i] = sigma[i], sigma[i - 1]
    return tuple(sigma)


def is_permutation(sigma, n:int=None):
    n = len(sigma) if n is None else n
    return len(sigma) == n and sorted(sigma) == list(range(1, n + 1))


def validate_permutation(sigma, n:int=None):
    if not is_permutation(tuple(sigma), n):
        raise ValueError(f"{tuple(sigma)} is not a permutation of "
                         f"1..{len(sigma) if n is None else n}")
    return tuple(sigma)


def compose(sigma, tau):
    """ Returns the product sigma*tau, i.e. the map j -> sigma(tau(j)) """
    if len(sigma) != len(tau):
        raise ValueError("Cannot compose permutations of different sizes")
    return tuple(sigma[t - 1] for t in tau)


def inverse(sigma):
    inv = [0] * len(sigma)
    for j, s in enumerate(sigma, start=1):
        inv[s - 1] = j
    return tuple(inv)


def all_permutations(n:int):
    """ Returns every element of Sigma_n, in lexicographic order """
    return [tuple(p) for p in permutations(range(1, n + 1))]


def group_order(n:int):
    return factorial(n)


def adjacent_word(sigma):
    """ Decomposes sigma into adjacent transpositions

    Args:
        sigma (tuple): permutation in one-line notation

    Returns:
        list: indices [i_1, ..., i_k] such that
            sigma = s_{i_k} * ... * s_{i_1}, where s_i = (i, i+1). Acting
            on a vector therefore applies s_{i_1} first.
    """
    current = list(sigma)
    word = []
    while True:
        descent = next((p for p in range(len(current) - 1)
                        if current[p] > current[p + 1]), None)
        if descent is None:
            break
        # right multiplication by s_i swaps positions i and i+1
        current[descent], current[descent + 1] = \
            current[descent + 1], current[descent]
        word.append(descent + 1)
    return word


def deletion(sigma, i:int):
    """ Returns the permutation of Sigma_{n-1} induced by sigma once input i
        is removed from the source and sigma(i) from the target.

        This is the permutation relating restrictions and actions:
        delta_{sigma(i)}(sigma . w) = deletion(sigma, i) . delta_i(w)
    """
    n = len(sigma)
    target = sigma[i - 1]
    result = []
    for j in range(1, n):
        source = j if j < i else j + 1
        image = sigma[source - 1]
        result.append(image if image < target else image - 1)
    return tuple(result)


def composition_permutation(sigma, i:int, n:int):
    """ Returns pi such that (sigma . a) o_{sigma(i)} b = pi . (a o_i b),
        for a of arity len(sigma) and b of arity n.
    """
    m = len(sigma)
    size = m + n - 1
    pi = [0] * size
    si = sigma[i - 1]
    for j in range(1, m + 1):
        if j == i:
            continue
        before = j if j < i else j + n - 1
        image = sigma[j - 1]
        after = image if image < si else image + n - 1
        pi[before - 1] = after
    for k in range(1, n + 1):
        pi[i + k - 2] = si + k - 1
    return tuple(pi)


def inner_composition_permutation(m:int, i:int, tau):
    """ Returns pi such that a o_i (tau . b) = pi . (a o_i b), for a of
        arity m.
    """
    n = len(tau)
    pi = list(range(1, m + n))
    for k in range(1, n + 1):
        pi[i + k - 2] = i + tau[k - 1] - 1
    return tuple(pi)


def koszul_sign(items):
    """ Returns the Koszul sign of reordering graded items

    Args:
        items (list of tuples): (reference_key, degree) pairs listed in
            their new order. The reference order is the sorted order of the
            keys.

    Returns:
        int: +1 or -1
    """
    odd = [key for key, degree in items if degree % 2]
    crossings = sum(1 for p in range(len(odd)) for q in range(p + 1, len(odd))
                    if odd[p] > odd[q])
    return -1 if crossings % 2 else 1


def limit_alert(items:list=None, item_name="", limit:int=100,
                issue:str="This may slow processing time."):
    """ Warns the user if there are too many items due to potentially slowed
        processing time
    """
    if items is None:
        return
    count = items if isinstance(items, int) else len(items)
    if count > limit:
        msg = f"More than {limit} {item_name} detected. {issue}"
        warn(msg)
