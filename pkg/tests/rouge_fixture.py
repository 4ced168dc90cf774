"""Ten candidate/reference pairs with P/R/F counted by hand.

Each entry: candidate, reference, then (P, R, F) for ROUGE-1, ROUGE-2
and ROUGE-L as exact fractions.
"""

from fractions import Fraction as Fr

Z = (Fr(0), Fr(0), Fr(0))
ONE = (Fr(1), Fr(1), Fr(1))

PAIRS = [
    # unigrams the,cat shared; bigram "the cat" shared; LCS "the cat"
    ("the cat sat", "the cat", (Fr(2, 3), Fr(1), Fr(4, 5)), (Fr(1, 2), Fr(1), Fr(2, 3)), (Fr(2, 3), Fr(1), Fr(4, 5))),
    ("a b c", "a x c", (Fr(2, 3), Fr(2, 3), Fr(2, 3)), Z, (Fr(2, 3), Fr(2, 3), Fr(2, 3))),
    # clipping: "a" counts once
    ("a a a", "a", (Fr(1, 3), Fr(1), Fr(1, 2)), Z, (Fr(1, 3), Fr(1), Fr(1, 2))),
    ("a b c d", "d c b a", ONE, Z, (Fr(1, 4), Fr(1, 4), Fr(1, 4))),
    ("x y", "z w", Z, Z, Z),
    ("", "a b", Z, Z, Z),
    # candidate bigrams: the-cat x2, cat-the x1
    ("the cat the cat", "the cat", (Fr(1, 2), Fr(1), Fr(2, 3)), (Fr(1, 3), Fr(1), Fr(1, 2)), (Fr(1, 2), Fr(1), Fr(2, 3))),
    # bigrams: a-b x2, b-a x1 against b-a x2, a-b x1; LCS "aba"
    ("a b a b", "b a b a", ONE, (Fr(2, 3), Fr(2, 3), Fr(2, 3)), (Fr(3, 4), Fr(3, 4), Fr(3, 4))),
    ("one two three four five", "one three five", (Fr(3, 5), Fr(1), Fr(3, 4)), Z, (Fr(3, 5), Fr(1), Fr(3, 4))),
    ("a b c", "a b c d e f", (Fr(1), Fr(1, 2), Fr(2, 3)), (Fr(1), Fr(2, 5), Fr(4, 7)), (Fr(1), Fr(1, 2), Fr(2, 3))),
]
