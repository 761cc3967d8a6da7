"""Frozen reference data for the discriminant -200, level 3 worked example.

The six reduced forms, the twelve level-3 class representatives, the 12x12
group table (1-based indices), and the integer minimal polynomial of the
identity-class invariant.  These are the fixed targets of `verify paper` and
of the acceptance suite.
"""

from __future__ import annotations

D200_DISC = -200
D200_LEVEL = 3

D200_REDUCED = [
    (1, 0, 50),
    (2, 0, 25),
    (3, -2, 17),
    (3, 2, 17),
    (6, -4, 9),
    (6, 4, 9),
]

# representatives g_1..g_12 with leading coefficients coprime to 3
D200_CLASS_REPS = [
    (1, 0, 50),
    (2, 0, 25),
    (17, 2, 3),
    (17, -2, 3),
    (11, -8, 6),
    (11, 8, 6),
    (50, 0, 1),
    (25, 0, 2),
    (22, -36, 17),
    (22, 36, 17),
    (25, 30, 11),
    (25, -30, 11),
]

# table[i][j] = k means g_{i+1} g_{j+1} = g_k (1-based k)
D200_TABLE = [
    [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12],
    [2, 1, 12, 11, 10, 9, 8, 7, 6, 5, 4, 3],
    [3, 12, 11, 1, 8, 10, 9, 6, 5, 7, 2, 4],
    [4, 11, 1, 12, 9, 8, 10, 5, 7, 6, 3, 2],
    [5, 10, 8, 9, 12, 1, 11, 4, 2, 3, 6, 7],
    [6, 9, 10, 8, 1, 11, 12, 3, 4, 2, 7, 5],
    [7, 8, 9, 10, 11, 12, 1, 2, 3, 4, 5, 6],
    [8, 7, 6, 5, 4, 3, 2, 1, 12, 11, 10, 9],
    [9, 6, 5, 7, 2, 4, 3, 12, 11, 1, 8, 10],
    [10, 5, 7, 6, 3, 2, 4, 11, 1, 12, 9, 8],
    [11, 4, 2, 3, 6, 7, 5, 10, 8, 9, 12, 1],
    [12, 3, 4, 2, 7, 5, 6, 9, 10, 8, 1, 11],
]

D200_INVARIANT_FACTORS = [2, 6]

# minimal polynomial of the identity-class invariant over K, degree 12,
# coefficients from x^12 down to the constant term
D200_MINPOLY = [
    1,
    -19732842623587344380,
    85622274889372918445313749346,
    583422788794106041510392970996250100,
    2412956602599045666947505580865471555967855,
    4622030004758636935674310042187173142345125210120,
    5159683938264742220691719229969015883694331066838711900,
    202375300752001975403428909178152428797277946213173155269640,
    2017771307025673942770713882875344826204880202806909292959103855,
    -2883328681523953153105049905288236082276160171409937896788594572300,
    4487601627619641192200184812721309459195966653602482165478526149968226,
    -19833699482405442556441925074783039534555541722620,
    1,
]

# oracle-equivalence battery: discriminants x levels
BATTERY_DISCS = [-15, -20, -24, -56, -71, -200]
BATTERY_LEVELS = [1, 2, 3, 4]
