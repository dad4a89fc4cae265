"""Class labels of Sp4(2) and Sp6(2) and their types on fundamental modules.

In these ranks every pair of labels is told apart by some L(w_i).
"""

from unipsep.harness import RunConfig, cmd_separate

for preset in ("sp4", "sp6"):
    report = cmd_separate(RunConfig(preset=preset, saturation=5000))
    print(f"{preset}: {len(report['labels'])} labels after {report['words_tried']} words")
    for e in report["labels"]:
        print(f"  {e['label']:<22} witness {e['witness']:<16} {' | '.join(e['types'])}")
    print("  unseparated pairs:", report["unseparated"] or "none")
