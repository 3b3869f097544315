"""Compare the two bundled fixture policies and print the permit derivation."""
from __future__ import annotations

import sys
from pathlib import Path

from policysim.model import show_term
from policysim.similarity import classify
from policysim.xacml import parse_xacml, translate

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
RENAME = {"subject-id:Alice": "u", "subject-id:Bob": "w",
          "resource-id:secret.txt": "x", "action-id:write": "y"}


def main() -> int:
    docs = [(FIXTURES / name).read_text(encoding="utf-8") for name in ("P.xml", "Q.xml")]
    tr = translate(*(parse_xacml(d) for d in docs))
    for label, term in zip("PQ", tr.terms):
        print(f"{label}: {show_term(term)}")
    report = classify(*docs, trace=True, witness=True)
    print(f"\nrelation: {report.relation}")
    print("\n".join(report.traces["permit ≈"].lines(RENAME)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
