"""Multiplicity vectors of a few quartics, computed exactly."""
from fractions import Fraction

from strata import polycore as pc

examples = {
    "(x-1)^2 (x+1)^2": "1,0,-2,0,1",
    "(x^2+1)^2": "1,0,2,0,1",
    "x^4": "1,0,0,0,0",
    "(x-1/3)^2 (x-2/5) (x^2+1)": None,
}

# build the last one from its factors instead of typing coefficients
p = pc.mul(pc.power((1, Fraction(-1, 3)), 2), pc.mul((1, Fraction(-2, 5)), (1, 0, 1)))
examples["(x-1/3)^2 (x-2/5) (x^2+1)"] = pc.to_text(p)

for name, text in examples.items():
    poly = pc.parse_poly(text)
    mv = pc.multiplicity_vector(poly)
    print(f"{name:28s} {text:32s} -> {mv}  surplus={mv.surplus}  pairs={mv.pairs(poly.degree)}")

# the square-free parts carry the multiplicities; roots are ordered across parts
p = pc.mul(pc.power((1, 0, -2), 4), (1, Fraction(-7, 5)))
for part in pc.squarefree_decomposition(p):
    print("factor", pc.to_text(part.factor), "multiplicity", part.multiplicity)
print("MV of (x^2-2)^4 (x-7/5):", pc.multiplicity_vector(p))

# the discriminant vanishes on every non-generic quartic
for text in ("1,0,-2,0,1", "1,0,-5,0,4"):
    q = pc.parse_poly(text).as_poly()
    print(text, "Res(P, P') =", pc.resultant(q, pc.derivative(q)))
