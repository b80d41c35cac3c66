"""Common factors of a 3-automatic and a 4-automatic sequence.

Their shared finite factors are exactly those of three bi-infinite words:
...111222..., ...222111... and the single word 0121^3.
"""

from substrata import analyze_common_factors, common_factors_upto, make_spec
from substrata.substitution import Substitution

x = make_spec(Substitution.from_strings({"0": "012", "1": "111", "2": "222"}), "0")
y = make_spec(Substitution.from_strings({"0": "0121", "1": "1111", "2": "2222"}), "0")

report = analyze_common_factors(x, y, 20)
for t in report.result.triples:
    print("triple:", t.text())
print("certification:", report.result.certification)
print("matches direct comparison:", report.result.language(20) == common_factors_upto(x, y, 20).words)
