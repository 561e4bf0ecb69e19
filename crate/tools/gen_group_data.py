#!/usr/bin/env python3
"""Generate the curated permutation-group data files under data/.

Builds M24 on the projective line over GF(23) (points 0..22 = GF(23),
23 = infinity), derives M23, M22, M12 and M11 as stabilizers of points,
octads and dodecads of the Steiner system S(5,8,24), and extracts each
subgroup used by the classification jobs as the stabilizer of a suitable
structure (k-subsets, special blocks, a Sylow normalizer) or by seeded
random search.  Every subgroup is verified against its target
(order, index) and the rank of the corresponding coset action.

Requires: numpy, sympy.  Run from the repository root:

    python3 tools/gen_group_data.py
"""

import json
import os
import random
import sys

import numpy as np
from sympy.combinatorics import Permutation, PermutationGroup

SEED = 20240817
rng = random.Random(SEED)

OUT = os.path.join(os.path.dirname(__file__), "..", "data")

# ---------------------------------------------------------------------------
# permutations as numpy arrays, a[i] = image of i; compose = apply a then b


def compose(a, b):
    return b[a]


def pinv(a):
    out = np.empty_like(a)
    out[a] = np.arange(len(a), dtype=a.dtype)
    return out


def identity(deg):
    return np.arange(deg, dtype=np.int16)


def elem_order(a):
    n = 1
    b = a
    ident = identity(len(a))
    while not np.array_equal(b, ident):
        b = compose(b, a)
        n += 1
    return n


def to_sympy(a):
    return Permutation(a.tolist())


def from_sympy(p, deg):
    arr = p.array_form
    arr = arr + list(range(len(arr), deg))
    return np.array(arr, dtype=np.int16)


def sympy_group(arrs):
    return PermutationGroup([to_sympy(a) for a in arrs])


# ---------------------------------------------------------------------------
# stabilizer-chain transversals (via sympy) for sampling and enumeration


def chain_levels(G, deg):
    G.schreier_sims()
    levels = []
    for tr in G.basic_transversals:
        levels.append(np.stack([from_sympy(p, deg) for p in tr.values()]))
    return levels


def rand_elem(levels, deg):
    # factorization runs deepest stabilizer first
    g = identity(deg)
    for T in reversed(levels):
        g = compose(g, T[rng.randrange(len(T))])
    return g


def enumerate_all(levels, deg):
    els = identity(deg)[None, :]
    for T in reversed(levels):
        # block compose: every current element followed by every rep
        blocks = [T[i][els] for i in range(len(T))]
        els = np.concatenate(blocks, axis=0)
    return els


# ---------------------------------------------------------------------------
# subgroup extraction


def shrink_generators(pool_levels, deg, target_order, label):
    """Find a small generating set for the group given by its chain."""
    for n_gens in (2, 3, 4):
        for _ in range(80):
            gens = [rand_elem(pool_levels, deg) for _ in range(n_gens)]
            if sympy_group(gens).order() == target_order:
                return gens
    raise RuntimeError(f"{label}: could not find small generating set")


def subgroup_by_sampling(levels, deg, prop, target_order, label, max_samples=3_000_000):
    gens = []
    order = 1
    for _ in range(max_samples):
        g = rand_elem(levels, deg)
        if not prop(g):
            continue
        gens.append(g)
        order = sympy_group(gens).order()
        if order == target_order:
            H = sympy_group(gens)
            return shrink_generators(chain_levels(H, deg), deg, target_order, label)
        if order > target_order:
            raise RuntimeError(f"{label}: overshot order {order} > {target_order}")
    raise RuntimeError(f"{label}: sampling exhausted at order {order}")


def subgroup_from_pool(pool, prop_mask, target_order, deg, label):
    """pool: (n, deg) array of all elements; prop_mask: boolean filter."""
    members = pool[prop_mask]
    if len(members) != target_order:
        raise RuntimeError(f"{label}: filter kept {len(members)}, want {target_order}")
    for n_gens in (2, 3, 4):
        for _ in range(80):
            gens = [members[rng.randrange(len(members))] for _ in range(n_gens)]
            if sympy_group(gens).order() == target_order:
                return gens
    raise RuntimeError(f"{label}: no small generating set")


def setstab_mask(pool, subset):
    s = np.array(sorted(subset))
    return (np.sort(pool[:, s], axis=1) == s[None, :]).all(axis=1)


def setstab_prop(subset):
    s = np.array(sorted(subset))

    def prop(g):
        return np.array_equal(np.sort(g[s]), s)

    return prop


# ---------------------------------------------------------------------------
# Steiner system S(5,8,24) structures


def set_orbit_size(gens, subset, cap=5000):
    start = frozenset(int(x) for x in subset)
    seen = {start}
    queue = [start]
    while queue:
        s = queue.pop()
        for g in gens:
            t = frozenset(int(g[x]) for x in s)
            if t not in seen:
                seen.add(t)
                queue.append(t)
                if len(seen) > cap:
                    return len(seen)
    return len(seen)


def octad_through(G24, gens24, pts5):
    S = G24
    for p in pts5:
        S = S.stabilizer(p)
    rest = [p for p in range(24) if p not in pts5]
    orbs = [sorted(o) for o in S.orbits() if len(o & set(rest)) == len(o)]
    # the 3 missing octad points form a union of orbits on the 19 rest points
    small = [o for o in orbs if len(o) <= 3]
    candidates = []
    for mask in range(1, 1 << len(small)):
        u = []
        for i in range(len(small)):
            if mask >> i & 1:
                u += small[i]
        if len(u) == 3:
            candidates.append(u)
    for extra in candidates:
        octad = sorted(list(pts5) + extra)
        if set_orbit_size(gens24, octad) == 759:
            return octad
    raise RuntimeError(f"no octad through {pts5}")


# ---------------------------------------------------------------------------
# coset-action verification (rank, orbital degrees, pairing blocks)


def coset_action(parent_gens, sub_gens, deg, index):
    Hsym = sympy_group(sub_gens)
    Hsym.schreier_sims()
    # H-orbit signature: sorted g-image of each H-orbit, concatenated
    horbits = [sorted(o) for o in Hsym.orbits()]
    horbits.sort()

    def signature(g):
        parts = []
        for o in horbits:
            parts.extend(sorted(int(g[p]) for p in o))
        return tuple(parts)

    reps = [identity(deg)]
    buckets = {signature(reps[0]): [0]}
    images = [[] for _ in parent_gens]
    i = 0
    while i < len(reps):
        g = reps[i]
        for gi, x in enumerate(parent_gens):
            h = compose(g, x)
            sig = signature(h)
            found = None
            for j in buckets.get(sig, []):
                if Hsym.contains(to_sympy(compose(h, pinv(reps[j])))):
                    found = j
                    break
            if found is None:
                found = len(reps)
                reps.append(h)
                buckets.setdefault(sig, []).append(found)
                images[gi].append(found)  # placeholder, fixed below
            images[gi].append((i, found))
        i += 1
    assert len(reps) == index, (len(reps), index)
    # rebuild generator images properly
    gen_images = []
    for gi, x in enumerate(parent_gens):
        img = np.empty(index, dtype=np.int32)
        for i in range(index):
            h = compose(reps[i], x)
            sig = signature(h)
            for j in buckets.get(sig, []):
                if Hsym.contains(to_sympy(compose(h, pinv(reps[j])))):
                    img[i] = j
                    break
            else:
                raise RuntimeError("coset lookup failed")
        gen_images.append(img)
    return reps, gen_images, Hsym


def action_profile(parent_gens, sub_gens, deg, index):
    reps, gen_images, Hsym = coset_action(parent_gens, sub_gens, deg, index)
    # point-stabilizer orbits on cosets = orbits of subgroup generator images
    sub_images = []
    for s in sub_gens:
        img = np.empty(index, dtype=np.int32)
        sig_buckets = {}
        # reuse: coset of reps[i]*s
        Hsym2 = Hsym
        horbits = [sorted(o) for o in Hsym2.orbits()]
        horbits.sort()

        def signature(g):
            parts = []
            for o in horbits:
                parts.extend(sorted(int(g[p]) for p in o))
            return tuple(parts)

        buckets = {}
        for j, r in enumerate(reps):
            buckets.setdefault(signature(r), []).append(j)
        for i in range(index):
            h = compose(reps[i], s)
            for j in buckets.get(signature(h), []):
                if Hsym2.contains(to_sympy(compose(h, pinv(reps[j])))):
                    img[i] = j
                    break
            else:
                raise RuntimeError("coset lookup failed")
        sub_images.append(img)
    # orbits of H on cosets
    parent_orbit = list(range(index))

    def find(x):
        while parent_orbit[x] != x:
            parent_orbit[x] = parent_orbit[parent_orbit[x]]
            x = parent_orbit[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent_orbit[ra] = rb

    for img in sub_images:
        for i in range(index):
            union(i, int(img[i]))
    orbit_id = {}
    orbit_members = {}
    for i in range(index):
        r = find(i)
        orbit_id.setdefault(r, len(orbit_id))
        orbit_members.setdefault(r, []).append(i)
    rank = len(orbit_id)
    # pairing structure: orbital with representative (0, p); paired orbital
    # contains (p, 0) = image of (0, p) under rep_p^{-1} ... find coset of
    # rep_p^{-1} and its orbit
    roots = sorted(orbit_members.keys(), key=lambda r: orbit_members[r][0])
    horbits = [sorted(o) for o in Hsym.orbits()]
    horbits.sort()

    def signature(g):
        parts = []
        for o in horbits:
            parts.extend(sorted(int(g[p]) for p in o))
        return tuple(parts)

    buckets = {}
    for j, r in enumerate(reps):
        buckets.setdefault(signature(r), []).append(j)

    def coset_of(g):
        for j in buckets.get(signature(g), []):
            if Hsym.contains(to_sympy(compose(g, pinv(reps[j])))):
                return j
        raise RuntimeError("coset lookup failed")

    self_paired = 0
    mutual = set()
    orbit_of_point = {}
    for r in roots:
        for m in orbit_members[r]:
            orbit_of_point[m] = r
    block_detail = []
    for r in roots:
        p = orbit_members[r][0]
        if p == 0:
            continue  # diagonal
        q = coset_of(pinv(reps[p]))
        partner = orbit_of_point[q]
        if partner == r:
            self_paired += 1
            block_detail.append([len(orbit_members[r])])
        elif frozenset((r, partner)) not in mutual:
            mutual.add(frozenset((r, partner)))
            block_detail.append(sorted([len(orbit_members[r]),
                                        len(orbit_members[partner])]))
    blocks = self_paired + len(mutual)
    degrees = sorted(len(orbit_members[r]) for r in roots)
    return rank, degrees, blocks, sorted(block_detail)


# ---------------------------------------------------------------------------
# output


def restrict(g, points):
    """Restrict g (which stabilizes `points` setwise) to sorted(points)."""
    pts = sorted(points)
    idx = {p: i for i, p in enumerate(pts)}
    return np.array([idx[int(g[p])] for p in pts], dtype=np.int16)


def write_grp(path, name, gens, order):
    deg = len(gens[0])
    with open(path, "w") as f:
        f.write(f"# {name}: degree {deg}, order {order}\n")
        f.write(f"degree {deg}\n")
        for g in gens:
            f.write(" ".join(str(int(x) + 1) for x in g) + "\n")


def main():
    os.makedirs(OUT, exist_ok=True)

    # ----- M24 on GF(23) + infinity ------------------------------------
    P = 23
    INF = 23
    inv23 = lambda t: pow(t, P - 2, P)
    sq = set(i * i % P for i in range(1, P))

    def mk(f):
        img = [f(t) for t in range(P)] + [f("inf")]
        assert sorted(img) == list(range(24))
        return np.array(img, dtype=np.int16)

    alpha = mk(lambda t: INF if t == "inf" else (t + 1) % P)
    beta = mk(lambda t: INF if t == "inf" else 2 * t % P)
    gamma = mk(lambda t: 0 if t == "inf" else INF if t == 0 else -inv23(t) % P)

    def dl(t):
        if t == "inf":
            return INF
        if t == 0:
            return 0
        return t ** 3 * inv23(9) % P if t in sq else 9 * t ** 3 % P

    delta = mk(dl)
    gens24 = [alpha, beta, gamma, delta]
    G24 = sympy_group(gens24)
    assert G24.order() == 244823040
    print("M24 ok")

    # Steiner system structures.  M23 fixes 23, M22 fixes {0, 23}.
    oct_a = octad_through(G24, gens24, [23, 0, 1, 2, 3])  # contains 0 and 23
    hexad = sorted(set(oct_a) - {0, 23})
    # octad containing 0 but not 23
    oct_b = None
    for extra in ([1, 2, 4], [1, 2, 5], [1, 4, 5], [2, 4, 6], [1, 2, 6]):
        o = octad_through(G24, gens24, [0] + extra + [extra[-1] + 3])
        if 23 not in o:
            oct_b = o
            break
    assert oct_b is not None
    heptad22 = sorted(set(oct_b) - {0})
    # octad containing 23 but not 0
    oct_c = None
    for pts in ([23, 1, 2, 4, 7], [23, 1, 2, 5, 9], [23, 1, 3, 5, 8]):
        o = octad_through(G24, gens24, pts)
        if 0 not in o:
            oct_c = o
            break
    assert oct_c is not None
    heptad23 = sorted(set(oct_c) - {23})
    # octad avoiding both 0 and 23, and one avoiding just 23
    oct_d = None
    for pts in ([1, 2, 4, 8, 9], [1, 2, 5, 10, 12], [2, 3, 5, 7, 11], [1, 3, 4, 9, 14]):
        o = octad_through(G24, gens24, pts)
        if 0 not in o and 23 not in o:
            oct_d = o
            break
    assert oct_d is not None
    # dodecad containing 23: symmetric difference of two octads meeting in 2 pts
    dodecad = None
    base = oct_c
    base_no23 = [p for p in base if p != 23]
    outside = [p for p in range(24) if p not in base]
    for _ in range(200):
        pts = rng.sample(base_no23, 2) + rng.sample(outside, 3)
        try:
            o = octad_through(G24, gens24, pts)
        except RuntimeError:
            continue
        inter = set(base) & set(o)
        if len(inter) == 2 and 23 not in inter:
            dodecad = sorted(set(base) ^ set(o))
            break
    assert dodecad is not None and len(dodecad) == 12 and 23 in dodecad
    assert set_orbit_size(gens24, dodecad) == 2576
    dodecad_c = sorted(set(range(24)) - set(dodecad))
    print("octads:", oct_a, oct_b, oct_c, oct_d)
    print("dodecad:", dodecad)

    levels24 = chain_levels(G24, 24)
    data = {}

    # ----- M24 subgroups ------------------------------------------------
    m24_sub = []
    m24_sub.append(("h1", subgroup_by_sampling(
        levels24, 24, setstab_prop([0, 23]), 887040, "M24 duad stab"), 887040, 276))
    m24_sub.append(("h2", subgroup_by_sampling(
        levels24, 24, setstab_prop(oct_d), 322560, "M24 octad stab"), 322560, 759))
    dset, dcset = set(dodecad), set(dodecad_c)

    def pair_prop(g):
        im = set(int(g[p]) for p in dodecad)
        return im == dset or im == dcset

    m24_sub.append(("h3", subgroup_by_sampling(
        levels24, 24, pair_prop, 190080, "M24 dodecad-pair stab"), 190080, 1288))
    m24_sub.append(("h4", subgroup_by_sampling(
        levels24, 24, setstab_prop([0, 1, 23]), 120960, "M24 triple stab"), 120960, 2024))
    data["m24"] = dict(gens=gens24, order=244823040, deg=24, points=list(range(24)),
                       subs=m24_sub)
    print("M24 subgroups ok")

    # ----- M23 = Stab(23), acting on 0..22 -----------------------------
    M23 = G24.stabilizer(23)
    assert M23.order() == 10200960
    gens23 = [from_sympy(p, 24) for p in M23.generators]
    levels23 = chain_levels(M23, 24)
    m23_sub = []
    m23_sub.append(("h1", subgroup_by_sampling(
        levels23, 24, setstab_prop([0, 1]), 40320, "M23 duad stab"), 40320, 253))
    m23_sub.append(("h2", subgroup_by_sampling(
        levels23, 24, setstab_prop(heptad23), 40320, "M23 heptad stab"), 40320, 253))
    oct_no23 = oct_d if 0 in oct_d else oct_d  # any octad avoiding 23
    # need octad avoiding 23 (may contain 0)
    oct_e = oct_d
    m23_sub.append(("h3", subgroup_by_sampling(
        levels23, 24, setstab_prop(oct_e), 20160, "M23 octad stab"), 20160, 506))
    endecad = sorted(set(dodecad) - {23})
    m23_sub.append(("h4", subgroup_by_sampling(
        levels23, 24, setstab_prop(endecad), 7920, "M23 endecad stab"), 7920, 1288))
    m23_sub.append(("h5", subgroup_by_sampling(
        levels23, 24, setstab_prop([0, 1, 2]), 5760, "M23 triple stab"), 5760, 1771))
    data["m23"] = dict(gens=gens23, order=10200960, deg=23, points=list(range(23)),
                       subs=m23_sub)
    print("M23 subgroups ok")

    # ----- M22 = Stab(0, 23), acting on 1..22 --------------------------
    M22 = M23.stabilizer(0)
    assert M22.order() == 443520
    gens22 = [from_sympy(p, 24) for p in M22.generators]
    levels22 = chain_levels(M22, 24)
    pool22 = enumerate_all(levels22, 24)
    assert len(pool22) == 443520
    m22_sub = []
    m22_sub.append(("h1", subgroup_from_pool(
        pool22, setstab_mask(pool22, hexad), 5760, 24, "M22 hexad stab"), 5760, 77))
    m22_sub.append(("h2", subgroup_from_pool(
        pool22, setstab_mask(pool22, heptad22), 2520, 24, "M22 heptad stab"), 2520, 176))
    m22_sub.append(("h3", subgroup_from_pool(
        pool22, setstab_mask(pool22, [1, 2]), 1920, 24, "M22 duad stab"), 1920, 231))
    m22_sub.append(("h4", subgroup_from_pool(
        pool22, setstab_mask(pool22, oct_d), 1344, 24, "M22 octad stab"), 1344, 330))
    # L2(11): seeded search for (order-11 element, involution) generating order 660
    elevens = []
    invols = []
    for _ in range(4000):
        g = pool22[rng.randrange(len(pool22))]
        o = elem_order(g)
        if o % 11 == 0 and len(elevens) < 40:
            h = g
            for _ in range(o // 11 - 1):
                h = compose(h, g)
            elevens.append(h)
        if o % 2 == 0 and len(invols) < 200:
            h = g
            for _ in range(o // 2 - 1):
                h = compose(h, g)
            invols.append(h)
        if len(elevens) >= 40 and len(invols) >= 200:
            break
    l2_gens = None
    for _ in range(3000):
        a = elevens[rng.randrange(len(elevens))]
        b = invols[rng.randrange(len(invols))]
        if sympy_group([a, b]).order() == 660:
            l2_gens = [a, b]
            break
    assert l2_gens is not None, "L2(11) in M22 not found"
    m22_sub.append(("h5", l2_gens, 660, 672))
    m22_sub.append(("h6", subgroup_from_pool(
        pool22, setstab_mask(pool22, [1, 2, 3]), 288, 24, "M22 triple stab"), 288, 1540))
    data["m22"] = dict(gens=gens22, order=443520, deg=22,
                       points=list(range(1, 23)), subs=m22_sub)
    print("M22 subgroups ok")

    # ----- M12 = Stab(dodecad), acting on the dodecad -------------------
    m12_raw = subgroup_by_sampling(levels24, 24, setstab_prop(dodecad), 95040,
                                   "M12 dodecad stab")
    M12 = sympy_group(m12_raw)
    levels12 = chain_levels(M12, 24)
    pool12 = enumerate_all(levels12, 24)
    assert len(pool12) == 95040
    D = sorted(dodecad)
    m12_sub = []
    m12_sub.append(("h1", subgroup_from_pool(
        pool12, setstab_mask(pool12, D[:2]), 1440, 24, "M12 duad stab"), 1440, 66))
    # L2(11) inside the stabilizer of a dodecad point (the class whose
    # coset action has all orbitals self-paired)
    fix0 = pool12[pool12[:, D[0]] == D[0]]
    elevens = []
    invols = []
    for _ in range(8000):
        g = fix0[rng.randrange(len(fix0))]
        o = elem_order(g)
        if o % 11 == 0 and len(elevens) < 40:
            h = g
            for _ in range(o // 11 - 1):
                h = compose(h, g)
            elevens.append(h)
        if o % 2 == 0 and len(invols) < 200:
            h = g
            for _ in range(o // 2 - 1):
                h = compose(h, g)
            invols.append(h)
        if len(elevens) >= 40 and len(invols) >= 200:
            break
    l2_gens = None
    for _ in range(5000):
        a = elevens[rng.randrange(len(elevens))]
        b = invols[rng.randrange(len(invols))]
        if sympy_group([a, b]).order() == 660:
            l2_gens = [a, b]
            break
    assert l2_gens is not None, "L2(11) in M12 not found"
    m12_sub.append(("h2", l2_gens, 660, 144))
    m12_sub.append(("h3", subgroup_from_pool(
        pool12, setstab_mask(pool12, D[:3]), 432, 24, "M12 triple stab"), 432, 220))
    m12_sub.append(("h4", subgroup_from_pool(
        pool12, setstab_mask(pool12, D[:4]), 192, 24, "M12 quad stab"), 192, 495))
    m12_sub.append(("h5", subgroup_from_pool(
        pool12, setstab_mask(pool12, D[:5]), 120, 24, "M12 pentad stab"), 120, 792))
    # second L2(11) class: transitive on the dodecad (the maximal class);
    # its coset action pairs the two degree-11 orbitals and contributes the
    # third non-isomorphic (144,66,30,30) graph
    elevens_t = []
    invols_t = []
    for _ in range(8000):
        g = pool12[rng.randrange(len(pool12))]
        o = elem_order(g)
        if o % 11 == 0 and len(elevens_t) < 40:
            h = g
            for _ in range(o // 11 - 1):
                h = compose(h, g)
            elevens_t.append(h)
        if o % 2 == 0 and len(invols_t) < 200:
            h = g
            for _ in range(o // 2 - 1):
                h = compose(h, g)
            invols_t.append(h)
        if len(elevens_t) >= 40 and len(invols_t) >= 200:
            break
    l2t_gens = None
    for _ in range(5000):
        a = elevens_t[rng.randrange(len(elevens_t))]
        b = invols_t[rng.randrange(len(invols_t))]
        H = sympy_group([a, b])
        if H.order() != 660:
            continue
        # transitive on the dodecad = not inside a dodecad-point stabilizer
        if len(H.orbits()) != 24 - 12 + 1:
            continue
        l2t_gens = [a, b]
        break
    assert l2t_gens is not None, "transitive L2(11) in M12 not found"
    m12_sub.append(("h6", l2t_gens, 660, 144))
    m12_gens = shrink_generators(levels12, 24, 95040, "M12")
    data["m12"] = dict(gens=m12_gens, order=95040, deg=12, points=D, subs=m12_sub)
    print("M12 subgroups ok")

    # ----- M11 = Stab(dodecad) ∩ Stab(23), on the 11 other dodecad points
    fix23 = pool12[:, 23] == 23
    pool11 = pool12[fix23]
    assert len(pool11) == 7920
    E11 = sorted(set(D) - {23})
    E12 = dodecad_c  # M11 acts transitively on the complementary dodecad
    m11_sub = []
    m11_sub.append(("h1", subgroup_from_pool(
        pool11, setstab_mask(pool11, E11[:2]), 144, 24, "M11 duad stab"), 144, 55))
    m11_sub.append(("h2", subgroup_from_pool(
        pool11, setstab_mask(pool11, E12[:2]), 120, 24, "M11 outer duad stab"), 120, 66))
    # Sylow-11 normalizer
    sigma = None
    for g in pool11:
        if elem_order(g) == 11:
            sigma = g
            break
    powers = set()
    h = sigma
    for _ in range(11):
        powers.add(h.tobytes())
        h = compose(h, sigma)
    mask = np.zeros(len(pool11), dtype=bool)
    for i, g in enumerate(pool11):
        conj = compose(compose(pinv(g), sigma), g)
        mask[i] = conj.tobytes() in powers
    m11_sub.append(("h3", subgroup_from_pool(
        pool11, mask, 55, 24, "M11 Sylow-11 normalizer"), 55, 144))
    m11_sub.append(("h4", subgroup_from_pool(
        pool11, setstab_mask(pool11, E11[:3]), 48, 24, "M11 triple stab"), 48, 165))
    m11_sub.append(("h5", subgroup_from_pool(
        pool11, setstab_mask(pool11, E12[:3]), 36, 24, "M11 outer triple stab"), 36, 220))
    m11_sub.append(("h6", subgroup_from_pool(
        pool11, setstab_mask(pool11, E11[:4]), 24, 24, "M11 quad stab"), 24, 330))
    M11 = sympy_group([pool11[rng.randrange(len(pool11))] for _ in range(3)])
    while M11.order() != 7920:
        M11 = sympy_group([pool11[rng.randrange(len(pool11))] for _ in range(3)])
    m11_gens = shrink_generators(chain_levels(M11, 24), 24, 7920, "M11")
    data["m11"] = dict(gens=m11_gens, order=7920, deg=11, points=E11, subs=m11_sub)
    print("M11 subgroups ok")

    # ----- restrict, verify coset-action profiles, write files ----------
    for name, d in data.items():
        gdir = os.path.join(OUT, name)
        os.makedirs(gdir, exist_ok=True)
        pts = d["points"]
        pgens = [restrict(g, pts) for g in d["gens"]]
        assert sympy_group(pgens).order() == d["order"]
        write_grp(os.path.join(gdir, f"{name}.grp"), name.upper(), pgens, d["order"])
        manifest = dict(group=f"{name}.grp", order=d["order"], degree=d["deg"],
                        subgroups=[])
        for sub_name, sgens, sorder, sindex in d["subs"]:
            rgens = [restrict(g, pts) for g in sgens]
            assert sympy_group(rgens).order() == sorder, (name, sub_name)
            assert d["order"] % sorder == 0 and d["order"] // sorder == sindex
            rank, degrees, blocks, block_detail = action_profile(pgens, rgens, d["deg"], sindex)
            fname = f"{sub_name}_o{sorder}_i{sindex}.grp"
            write_grp(os.path.join(gdir, fname),
                      f"{name.upper()} subgroup, order {sorder}, index {sindex}",
                      rgens, sorder)
            manifest["subgroups"].append(dict(
                file=fname, order=sorder, index=sindex, rank=rank,
                pairing_blocks=blocks, orbital_degrees=degrees,
                pairing_block_degrees=block_detail))
            print(f"{name}/{sub_name}: order {sorder} index {sindex} "
                  f"rank {rank} blocks {blocks}")
        with open(os.path.join(gdir, "manifest.json"), "w") as f:
            json.dump(manifest, f, indent=2)
    print("all data written")


if __name__ == "__main__":
    sys.exit(main())
