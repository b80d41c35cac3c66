"""Substitutions, fixed points and letter structure.

Builds the Thue-Morse substitution, prints a prefix of its fixed point and
its factor complexity, then shows why it is not idempotent until squared.
"""

from substrata import classify_letters, idempotent_exponent, is_idempotent, make_spec, power
from substrata.sequences import complexity, kernel
from substrata.substitution import Substitution

tm = Substitution.from_strings({"0": "01", "1": "10"})
spec = make_spec(tm, "0")
print("prefix:    ", "".join(spec.prefix(32)))
print("p(0..10):  ", complexity(spec, 10))

report = is_idempotent(tm)
print("idempotent:", report.idempotent, "failures (property, letter, exponent):", report.witness_failures)
m = idempotent_exponent(tm)
print(f"phi^{m} idempotent:", is_idempotent(power(tm, m)).idempotent)

cls = classify_letters(Substitution.from_strings({"0": "12", "1": "11", "2": "23", "3": "32"}))
print("classes:   ", [sorted(c) for c in cls.equiv_classes])
print("minimal:   ", sorted(cls.minimal_letters))

# the kernel: x[2n + j] is a fixed letter map applied to x[n]
desc = kernel(spec)
print("kernel maps:", sorted(desc.maps))
