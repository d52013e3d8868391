"""
Deciding irreducibility from characters
=======================================

Read the example fixture and print, for each tuple, the verdict of the GL_2 / GL_3
criterion, the parabolic cut out by the algebraic weights, and the general GL_n test.
"""

from pathlib import Path

from psverify.criterion import decide_gln, iota_transform, q_parabolic
from psverify.fixtures import load_fixture
from psverify.suites import decide_tuple

fixture = load_fixture(Path(__file__).resolve().parents[1] / "fixtures" / "gl3_examples.yaml")
print(f"field Q_{fixture.p}, f = {fixture.f}: {len(fixture.tuples)} tuples\n")
for t in fixture.tuples:
    result = decide_tuple(t.characters)
    line = f"{t.name:26s} n={len(t.characters)}  {result['verdict']['decision']:12s}"
    if len(t.characters) == 3:
        line += f" parabolic {q_parabolic(t.characters):3s} gln says {decide_gln(t.characters).decision}"
    print(line + ("" if t.expect in (None, result["verdict"]["decision"]) else "   <-- unexpected"))

# The verdict does not change under chi -> (chi_3^-1, chi_2^-1, chi_1^-1).
t = fixture.tuples[2].characters
print("\nwitness before and after iota:", decide_tuple(t)["verdict"]["witness"],
      decide_tuple(list(iota_transform(t)))["verdict"]["witness"])
