"""Two unipotent classes of Sp10(2) that no fundamental module tells apart.

Run with ``python3 demos/counterexample.py``; takes a few seconds.
"""

from unipsep.harness import fmt_type
from unipsep.jordan import jordan_type, unipotent_order
from unipsep.modules import evaluate_word
from unipsep.presets import load_preset
from unipsep.symplectic import hesselink_label
from unipsep.weights import ModuleBuilder, Weight, jordan_on_weight

preset = load_preset("sp10")
u, v = preset.words["u"], preset.words["u'"]

# %% Both words give unipotent isometries of order 8 with the same Jordan type
for name, w in (("u", u), ("u'", v)):
    m = evaluate_word(preset.rep, w)
    print(f"{name:2} = {w}: order {unipotent_order(m)}, type {fmt_type(jordan_type(m))}, "
          f"label {hesselink_label(m, preset.form)}")

# %% The labels differ, so the classes differ; the types on L(w_i) do not
builder = ModuleBuilder(preset, seed=0)
for i in range(1, 6):
    weight = Weight.fundamental(5, i)
    tu = jordan_on_weight(weight, u, preset, builder=builder)
    tv = jordan_on_weight(weight, v, preset, builder=builder)
    print(f"L({weight}) dim {tu.dim:4}: {fmt_type(tu):28} {'same' if tu == tv else 'DIFFERENT'}")
