import random

import pytest

from mtddplus.automata import TuringMachine, parse_tm

# tapeLen = 1; input "1" is accepted after three steps, input "" is rejected
DET_MACHINE = """\
states q0 q1 q2 qf ; initial q0 ; accept qf ; blank _ ; tape _ 1 ;
q0 1 -> q1 1 S
q1 1 -> q2 _ S
q2 _ -> qf _ S
"""

# tapeLen = 1; two accepting runs of length 2 on the empty input
COUNT_MACHINE = """\
states q0 q1 q2 qf ; initial q0 ; accept qf ; blank _ ; tape _ 1 ;
q0 _ -> q1 1 S
q0 _ -> q2 _ S
q1 1 -> qf _ S
q2 _ -> qf _ S
"""

# moves in every direction, used for the step-relation tests
WALKER = """\
states p q f ; initial p ; accept f ; blank _ ; tape _ a b ;
p _ -> q a R
p a -> p b L
q a -> q _ S
q b -> p a R
q b -> f b L
q _ -> p b S
"""


def random_machine(rng: random.Random, max_states: int = 3, max_symbols: int = 3) -> TuringMachine:
    nq, ng = rng.randint(1, max_states), rng.randint(1, max_symbols)
    states = [f"q{i}" for i in range(nq)]
    tape = ["_", "a", "b"][:ng]
    trans: dict = {}
    for q in states[:-1] if nq > 1 else []:
        for a in tape:
            for _ in range(rng.randint(0, 2)):
                trans.setdefault((q, a), []).append(
                    (rng.choice(states), rng.choice(tape), rng.choice("LRS")))
    return TuringMachine(states, states[0], states[-1], "_", tape, trans)


def fixture_machines() -> list[TuringMachine]:
    rng = random.Random(2024)
    fixed = [parse_tm(t) for t in (WALKER,)]
    fixed.append(TuringMachine(["s"], "s", "s", "_", ["_"], {}))
    # |Q| <= 3 for the fixture set
    fixed.append(parse_tm("""states q0 q1 ; initial q0 ; accept q1 ; blank _ ; tape _ x ;
q0 _ -> q1 x S
q0 x -> q1 _ S
"""))
    return fixed + [random_machine(rng) for _ in range(25)]


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def det_machine():
    return parse_tm(DET_MACHINE)


@pytest.fixture
def count_machine():
    return parse_tm(COUNT_MACHINE)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
