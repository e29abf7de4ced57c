# Shape-checking stand-in for a real solver. Answers unsat only when the
# script on stdin looks like a well-formed obligation: balanced parentheses,
# a known logic up front, a negated goal, and a final (check-sat). Anything
# else gets an unrecognized reply, which the driver classifies as an error.
import sys

KNOWN_LOGICS = tuple(
    "(set-logic %s%s%s)" % (qf, uf, arith)
    for qf in ("QF_", "")
    for uf in ("UF", "")
    for arith in ("LIA", "NIA")
)


def reject(why):
    print("script rejected:", why)
    sys.exit(0)


text = sys.stdin.read()
if not text:
    reject("empty script")

depth = 0
for line in text.splitlines():
    code = line.split(";", 1)[0]
    for ch in code:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                reject("unbalanced parentheses")
if depth != 0:
    reject("unbalanced parentheses")

lines = [l for l in text.splitlines() if l and not l.startswith(";")]
if not lines:
    reject("no commands")
if lines[0] not in KNOWN_LOGICS:
    reject("unexpected logic line " + repr(lines[0]))
if lines[-1] != "(check-sat)":
    reject("missing (check-sat)")
if text.count("(check-sat)") != 1:
    reject("more than one (check-sat)")
if not any(l.startswith("(assert (not ") for l in lines):
    reject("no negated goal")
for l in lines[1:-1]:
    if not (
        l.startswith("(declare-const ")
        or l.startswith("(declare-fun ")
        or l.startswith("(assert ")
    ):
        reject("unexpected command " + repr(l))

print("unsat")
