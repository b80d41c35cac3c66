"""Minimal subsystems, transitivity and generating sequences.

The first substitution splits into the fixed point 1^w and a Thue-Morse
system on {2, 3}; it is not transitive.  The second is transitive, with a
generating sequence 0 w tau(w) tau^2(w) ... for w = 23.
"""

from substrata import (generator_prefix, is_transitive, minimal_subsystems, power, subshift_language,
                       transitive_generators)
from substrata.substitution import Substitution
from substrata.subsystems import GeneratorSequence

split = Substitution.from_strings({"0": "12", "1": "11", "2": "23", "3": "32"})
for m in minimal_subsystems(split):
    print(f"minimal on {sorted(m.letters)}: {m.periodicity}")
print("transitive:", is_transitive(split))

tau = Substitution.from_strings({"0": "01023", "1": "12", "2": "22", "3": "33"})
print("transitive:", is_transitive(tau))
for g in transitive_generators(tau):
    if isinstance(g, GeneratorSequence) and g.kind == "B1":
        print(g.text(), "->", "".join(generator_prefix(g, tau, 20)))

# a subshift can shrink when the substitution is squared
phi = Substitution.from_strings({"0": "12", "1": "22", "2": "11"})
once, twice = subshift_language(phi, 2).words, subshift_language(power(phi, 2), 2).words
print("two-letter words lost by squaring:", sorted("".join(w) for w in once - twice))
