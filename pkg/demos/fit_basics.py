"""Fit one vector autoregression by least squares and read the result.

Generates a stable two-variable system with known coefficients, fits the
true configuration, and prints the fitted matrices next to the truth.
"""

import numpy as np

from varsearch import (
    CriterionKind,
    GeneratorSpec,
    ModelConfig,
    RunConfig,
    fit,
    generate,
    random_stable_coefficients,
    write_report,
)

truth = random_stable_coefficients(n=2, p=2, radius=0.9, seed=42)
dataset = generate(
    GeneratorSpec(coefficients=truth, t=400, noise_scale=0.3, seed=7)
)

config = ModelConfig(
    p=2, q=0, dependent_mask=(True, True), include_constant=True
)
result = fit(dataset, config)

print("true A_1:")
print(np.round(truth.a[0], 4))
print("fitted A_1:")
print(np.round(result.coefficients.a[0], 4))
print()
print("effective sample:", result.effective_t)
print("parameters per equation:", result.n_params)
for kind in CriterionKind:
    print(f"{kind.name} = {result.criterion(kind):.6f}")

print()
report = write_report(
    result, "human", RunConfig("fit", {"p": 2, "noise": 0.3}), dataset.names
)
print(report.decode("utf-8"))
