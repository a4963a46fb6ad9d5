"""Independent reference computations used to freeze expected values.

Nothing here touches the closure-based algebra builder; the path-congruence
count below only reads the parsed presentation.
"""

from __future__ import annotations

from dihedral_udr.quiver import Presentation


def _all_paths(pres: Presentation, max_len: int) -> dict[tuple, tuple[str, str]]:
    """Nontrivial paths as letter tuples (leftmost letter traversed last) -> (source, target)."""
    arrows = [(a.name, a.source, a.target) for a in pres.quiver.arrows]
    out = {}
    layer = {(n,): (s, t) for n, s, t in arrows}
    while layer:
        out.update(layer)
        nxt = {}
        for letters, (s, t) in layer.items():
            if len(letters) == max_len:
                continue
            for n, s2, t2 in arrows:
                if t2 == s:
                    nxt[(*letters, n)] = (s2, t)
        layer = nxt
    return out


def path_congruence_dim(pres: Presentation, max_len: int = 12, p: int = 13) -> int:
    """Count nonzero classes of paths under the relations.

    Valid when every relation is a monomial or a binomial ``c1*u + c2*w`` with
    ``c2/c1 = +-1`` (true for the catalog).  Paths longer than ``max_len`` are
    treated as zero, so ``max_len`` must exceed the nilpotency length; callers
    check that the count is unchanged at a larger cap.
    """
    paths = _all_paths(pres, max_len)
    ends = dict(paths)
    keys = list(paths)
    idx = {w: i for i, w in enumerate(keys)}
    parent = list(range(len(keys)))
    sign = [1] * len(keys)  # path_i = sign_i * path_parent
    zero = [False] * len(keys)

    def find(i):
        if parent[i] == i:
            return i, 1
        r, s = find(parent[i])
        parent[i] = r
        sign[i] *= s
        return r, sign[i]

    def union(i, j, s):  # path_i = s * path_j
        ri, si = find(i)
        rj, sj = find(j)
        if ri == rj:
            if si != s * sj:  # x = -x forces x = 0 for odd p
                zero[ri] = True
            return
        parent[ri] = rj
        sign[ri] = si * s * sj
        zero[rj] = zero[rj] or zero[ri]

    def kill(i):
        zero[find(i)[0]] = True

    by_source: dict[str, list[tuple]] = {}
    by_target: dict[str, list[tuple]] = {}
    for w, (s, t) in ends.items():
        by_source.setdefault(s, []).append(w)
        by_target.setdefault(t, []).append(w)

    def pads(source, target, length):
        """(left, right) with left+word+right a path of length <= max_len; empty pieces allowed."""
        room = max_len - length
        ls = [()] + [w for w in by_source.get(target, []) if len(w) <= room]
        rs = [()] + [w for w in by_target.get(source, []) if len(w) <= room]
        for l in ls:
            for r in rs:
                if len(l) + len(r) <= room:
                    yield l, r

    for rel in pres.relations:
        terms = list(rel.terms)
        src, tgt = rel.source, rel.target
        if len(terms) == 1:
            (_, w), = terms
            for l, r in pads(src, tgt, len(w.letters)):
                full = (*l, *w.letters, *r)
                if full in idx:
                    kill(idx[full])
        elif len(terms) == 2:
            (c1, w1), (c2, w2) = terms
            ratio = (-c2 * pow(c1, -1, p)) % p
            if ratio not in (1, p - 1):
                raise ValueError("oracle needs +-1 binomials")
            s = 1 if ratio == 1 else -1
            for l, r in pads(src, tgt, min(len(w1.letters), len(w2.letters))):
                a = (*l, *w1.letters, *r)
                b = (*l, *w2.letters, *r)
                if a in idx and b in idx:
                    union(idx[a], idx[b], s)
                elif a in idx:
                    kill(idx[a])
                elif b in idx:
                    kill(idx[b])
        else:
            raise ValueError("oracle handles monomial and binomial relations only")

    roots = {find(i)[0] for i in range(len(keys))}
    return len(pres.quiver.vertices) + sum(1 for r in roots if not zero[r])


__all__ = ["path_congruence_dim"]
