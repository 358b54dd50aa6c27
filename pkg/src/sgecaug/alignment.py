"""Minimum-cost token alignment with deterministic tie-breaking.

Unit costs (match=0, substitute=delete=insert=1). When dynamic-program
costs tie during backtracking from the end, the preference order is
match > substitute > delete > insert, which pins a unique edit script.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

MATCH = "match"
SUBSTITUTE = "substitute"
DELETE = "delete"
INSERT = "insert"


@dataclass(frozen=True)
class EditOp:
    kind: str
    ref_index: Optional[int] = None
    hyp_index: Optional[int] = None


@dataclass
class EditScript:
    ops: list[EditOp]
    total_cost: int

    @property
    def ref_len(self) -> int:
        return sum(1 for op in self.ops if op.ref_index is not None)

    @property
    def hyp_len(self) -> int:
        return sum(1 for op in self.ops if op.hyp_index is not None)

    def counts(self) -> tuple[int, int, int]:
        """(substitutions, deletions, insertions)."""
        subs = sum(1 for op in self.ops if op.kind == SUBSTITUTE)
        dels = sum(1 for op in self.ops if op.kind == DELETE)
        ins = sum(1 for op in self.ops if op.kind == INSERT)
        return subs, dels, ins


def align_tokens(
    reference: Sequence[str],
    hypothesis: Sequence[str],
    fold_case: bool = False,
) -> EditScript:
    """Align two token sequences at minimum edit cost.

    With fold_case, tokens are lowered before the equality test only; the
    returned ops still index the original sequences.
    """
    ref = [t.lower() for t in reference] if fold_case else list(reference)
    hyp = [t.lower() for t in hypothesis] if fold_case else list(hypothesis)
    n, m = len(ref), len(hyp)

    # cost[i][j] = edit distance between ref[:i] and hyp[:j]
    prev = list(range(m + 1))
    rows = [prev]
    for i in range(1, n + 1):
        cur = [i] + [0] * m
        ri = ref[i - 1]
        for j in range(1, m + 1):
            if ri == hyp[j - 1]:
                cur[j] = prev[j - 1]
            else:
                cur[j] = 1 + min(prev[j - 1], prev[j], cur[j - 1])
        rows.append(cur)
        prev = cur

    ops: list[EditOp] = []
    i, j = n, m
    while i > 0 or j > 0:
        cost = rows[i][j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and rows[i - 1][j - 1] == cost:
            ops.append(EditOp(MATCH, i - 1, j - 1))
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and rows[i - 1][j - 1] + 1 == cost:
            ops.append(EditOp(SUBSTITUTE, i - 1, j - 1))
            i -= 1
            j -= 1
        elif i > 0 and rows[i - 1][j] + 1 == cost:
            ops.append(EditOp(DELETE, i - 1, None))
            i -= 1
        else:
            ops.append(EditOp(INSERT, None, j - 1))
            j -= 1
    ops.reverse()
    return EditScript(ops=ops, total_cost=rows[n][m])


def project_anchor(script: EditScript, ref_position: int) -> int:
    """Map a between-token boundary in the reference to one in the hypothesis.

    Boundary 0 maps to 0 and the end boundary maps to the hypothesis end;
    interior boundaries map just after the last hypothesis token matched or
    substituted against a reference token strictly before ref_position, so
    insertions at the boundary stay to its right.
    """
    ref_len = script.ref_len
    if not (0 <= ref_position <= ref_len):
        raise ValueError(
            f"ref_position {ref_position} out of range [0,{ref_len}]"
        )
    if ref_position == 0:
        return 0
    if ref_position == ref_len:
        return script.hyp_len
    boundary = 0
    for op in script.ops:
        if (
            op.ref_index is not None
            and op.ref_index < ref_position
            and op.hyp_index is not None
        ):
            boundary = op.hyp_index + 1
    return boundary
