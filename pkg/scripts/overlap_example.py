"""The two-entry example where no threshold separates the classes.

Entry 1 covers [4, 9] (label +1), entry 2 covers [1, 6] (label -1). Over
``x1 > c`` the best worst-case margin is -1, attained at c = 5.
"""
from uastl import IntervalTrajectory, LabeledDataset, single_predicate_grammar
from uastl.encoder import ExternalSmtBackend, InternalEnumerativeBackend
from uastl.inference import InferenceParams, check_separable, tli_ua
from uastl.objective import objective_dataset
from uastl.parser import parse_formula

pos = IntervalTrajectory([[4.0]], [[9.0]])
neg = IntervalTrajectory([[1.0]], [[6.0]])
data = LabeledDataset([(pos, 1), (neg, -1)])
params = InferenceParams(max_size=1, grammar=single_predicate_grammar(1))

print("separable:", check_separable(pos, neg))
for c in (4, 5, 6):
    print(f"F(x1 > {c}) = {objective_dataset(data, parse_formula(f'x1 > {c}'))}")

backends = [InternalEnumerativeBackend()]
if ExternalSmtBackend().available():
    backends.append(ExternalSmtBackend())
for b in backends:
    res = tli_ua(data, params, b)
    print(f"{b.name:>8}: {res.formula_text}  F = {res.value}")
