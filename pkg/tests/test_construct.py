from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from argldpc.bounds import stall_consistency_check
from argldpc.construct import (BestEffortWarning, ConstructionStalled, ConstructionTrace,
                               InvalidParameters, PhaseState, StallEvent, TieBreakPolicy,
                               TraceRecord, construct, construct_reference, phase_of,
                               select_edge, validate_params, verify_phase_invariants)
from argldpc.graph import (ACYCLIC, UNREACHABLE, BipartiteGraph, L, R, Side, degree_profile, girth,
                           new_graph)

GOLDEN = Path(__file__).parent / "golden"


class TestValidate:
    def test_guaranteed(self):
        prm = validate_params(504, 252, 1, 2, 3)
        assert prm.guaranteed
        assert prm.threshold == pytest.approx(255 / 9)
        assert prm.total_edges == 1512

    def test_best_effort(self):
        prm = validate_params(40, 20, 1, 2, 3)
        assert not prm.guaranteed
        assert prm.threshold == pytest.approx(23 / 9)

    @pytest.mark.parametrize("raw,rule", [
        ((10, 5, 2, 3, 1), "np=mq"),
        ((6, 6, 1, 1, 1), "n>m>1"),
        ((2, 1, 1, 2, 1), "n>m>1"),
        ((6, 3, 2, 1, 1), "p<q"),
        ((4, 2, 1, 2, 0), "positive"),
    ])
    def test_rejected(self, raw, rule):
        with pytest.raises(InvalidParameters) as info:
            validate_params(*raw)
        assert info.value.rule == rule
        assert f"[{rule}]" in str(info.value)

    def test_best_effort_warns(self):
        with pytest.warns(BestEffortWarning):
            construct(validate_params(40, 20, 1, 2, 3))


@pytest.mark.parametrize("e,want", [(1, (1, 1)), (252, (1, 1)), (253, (1, 2)),
                                    (504, (1, 2)), (505, (2, 3)), (1512, (3, 6))])
def test_phase_of(e, want):
    assert phase_of(e, 504, 252) == want
    assert PhaseState.at(e, 504, 252) == PhaseState(e, *want)


class TestSelectEdge:
    policy = TieBreakPolicy.deterministic()

    def test_first_edge(self):
        rec = select_edge(new_graph(4, 2), PhaseState.at(1, 4, 2), self.policy)
        assert (rec.source, rec.target, rec.distance) == (L(1), R(1), UNREACHABLE)

    def test_second_edge(self):
        g = new_graph(4, 2).add_edge(L(1), R(1))
        rec = select_edge(g, PhaseState.at(2, 4, 2), self.policy)
        assert (rec.source, rec.target) == (R(2), L(2))

    def test_fourth_edge(self):
        g = new_graph(4, 2).add_edge(L(1), R(1)).add_edge(R(2), L(2)).add_edge(L(3), R(1))
        rec = select_edge(g, PhaseState.at(4, 4, 2), self.policy)
        assert rec.source == R(2)
        assert rec.candidates == 3
        assert rec.target == L(4) and rec.distance == UNREACHABLE

    def test_stall_signalled(self):
        # every right vertex is adjacent to the source, so S is empty
        g = BipartiteGraph.complete(4, 2)
        out = select_edge(g, PhaseState(9, 3, 5), self.policy)
        assert out == StallEvent(9, 3, 5, L(1))
        assert out.odd and out.source_side is Side.LEFT


def _trace_or_stall(engine, prm, pol):
    try:
        return engine(prm, pol).trace
    except ConstructionStalled as exc:
        return exc.trace


class TestConstruct:
    def test_hand_trace(self):
        graph, trace = construct(validate_params(4, 2, 1, 2, 1))
        assert trace.edges() == [(L(1), R(1)), (L(2), R(2)), (L(3), R(1)), (L(4), R(2))]
        assert [r.source for r in trace.records] == [L(1), R(2), L(3), R(2)]
        assert graph.left_degrees() == [1] * 4 and graph.right_degrees() == [2, 2]
        assert girth(graph) == ACYCLIC

    def test_golden_trace(self):
        _, trace = construct(validate_params(4, 2, 1, 2, 1))
        assert trace.to_text() == (GOLDEN / "arg_4_2_1_2_1.trace").read_text()

    def test_girth_eight_code(self):
        graph, trace = construct(validate_params(252, 126, 1, 2, 3))
        assert graph.edge_count == len(trace) == 756
        assert girth(graph) >= 8

    def test_small_guaranteed(self):
        prm = validate_params(40, 20, 1, 2, 2)
        assert prm.guaranteed
        graph, _ = construct(prm)
        left, right = degree_profile(graph)
        assert set(left) <= {1, 2, 3} and set(right) <= {3, 4, 5}

    def test_code_degrees(self):
        graph, _ = construct(validate_params(504, 252, 1, 2, 3))
        left, right = degree_profile(graph)
        assert set(left) <= {2, 3, 4} and set(right) <= {5, 6, 7}
        assert sum(k * v for k, v in left.items()) == 1512

    def test_stall_raises_with_context(self):
        with pytest.raises(ConstructionStalled) as info:
            construct(validate_params(8, 4, 1, 2, 5))
        exc = info.value
        assert exc.trace.stall == exc.event
        assert len(exc.trace) == exc.event.e - 1 == exc.graph.edge_count
        assert stall_consistency_check(exc.event, validate_params(8, 4, 1, 2, 5))

    @pytest.mark.parametrize("params", [(4, 2, 1, 2, 1), (40, 20, 1, 2, 2), (36, 12, 1, 3, 2),
                                        (30, 20, 2, 3, 1), (60, 30, 1, 2, 3), (8, 4, 1, 2, 5)])
    @pytest.mark.parametrize("seed", [None, 0, 17])
    def test_fast_engine_matches_reference(self, params, seed):
        prm = validate_params(*params)
        pol = TieBreakPolicy() if seed is None else TieBreakPolicy.seeded(seed)
        fast, ref = (_trace_or_stall(engine, prm, pol) for engine in (construct, construct_reference))
        assert fast.records == ref.records
        assert fast.stall == ref.stall

    def test_deterministic(self):
        prm = validate_params(120, 60, 1, 2, 3)
        assert construct(prm).trace.to_text() == construct(prm).trace.to_text()
        a = construct(prm, TieBreakPolicy.seeded(5)).trace.to_text()
        assert a == construct(prm, TieBreakPolicy.seeded(5)).trace.to_text()
        assert a != construct(prm, TieBreakPolicy.seeded(6)).trace.to_text()

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            TieBreakPolicy(mode="shuffled")


class TestPhaseInvariants:
    def test_hand_run(self):
        prm = validate_params(4, 2, 1, 2, 1)
        report = verify_phase_invariants(construct(prm).trace, prm)
        assert report and report.left_phases_checked == 1 and report.right_phases_checked == 2

    def test_code(self):
        prm = validate_params(504, 252, 1, 2, 3)
        report = verify_phase_invariants(construct(prm).trace, prm)
        assert report.ok
        assert (report.left_phases_checked, report.right_phases_checked) == (3, 6)
        assert report.edges_checked == 1512

    def test_injected_out_of_window_edge(self):
        prm = validate_params(40, 20, 1, 2, 2)
        recs = list(construct(prm).trace.records)
        # reroute edges 5 and 7 through the first source: degree 3 in left phase 1
        hub = recs[0].source
        for e in (5, 7):
            r = recs[e - 1]
            recs[e - 1] = TraceRecord(e, r.i, r.j, hub, r.target, r.distance)
        report = verify_phase_invariants(ConstructionTrace(recs), prm)
        assert not report.ok
        assert report.violation == f"phase (1, 1), edge 7: vertex {hub} exceeds degree 2"

    def test_injected_target_over_cap(self):
        prm = validate_params(40, 20, 1, 2, 2)
        recs = list(construct(prm).trace.records)
        hub = recs[0].target
        for e in (3, 5):
            r = recs[e - 1]
            recs[e - 1] = TraceRecord(e, r.i, r.j, r.source, hub, r.distance)
        report = verify_phase_invariants(ConstructionTrace(recs), prm)
        assert not report.ok
        assert report.violation.startswith(f"phase (1, 1), edge 5: target {hub} already has degree 2")

    def test_unbalanced_phase_end(self):
        # L4 never used, so left phase 1 ends with degrees (2, 1, 1, 0)
        prm = validate_params(4, 2, 1, 2, 1)
        recs = [TraceRecord(1, 1, 1, L(1), R(1), UNREACHABLE),
                TraceRecord(2, 1, 1, R(2), L(2), UNREACHABLE),
                TraceRecord(3, 1, 2, L(3), R(1), UNREACHABLE),
                TraceRecord(4, 1, 2, R(2), L(1), UNREACHABLE)]
        assert verify_phase_invariants(ConstructionTrace(recs), prm).ok
        recs[3] = TraceRecord(4, 1, 2, R(2), L(2), UNREACHABLE)
        report = verify_phase_invariants(ConstructionTrace(recs), prm)
        assert not report.ok and "already adjacent" in report.violation

    def test_wrong_side(self):
        prm = validate_params(4, 2, 1, 2, 1)
        recs = list(construct(prm).trace.records)
        recs[1] = TraceRecord(2, 1, 1, L(2), R(2), UNREACHABLE)
        report = verify_phase_invariants(ConstructionTrace(recs), prm)
        assert not report.ok and "wrong side" in report.violation


def test_trace_text_round_trip():
    with pytest.raises(ConstructionStalled) as info:
        construct(validate_params(8, 4, 1, 2, 5))
    trace = info.value.trace
    back = ConstructionTrace.from_text(trace.to_text())
    assert back.records == trace.records and back.stall == trace.stall
    assert "# stall" in trace.to_text()


_GUARANTEED = [(n, p, q, d) for p, q in ((1, 2), (1, 3), (2, 3)) for n in range(6, 200, 6)
               for d in (1, 2, 3) if d <= (n * p // q + 3) / (3 * (p + q))]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(_GUARANTEED), st.integers(0, 2**63))
def test_guaranteed_never_stalls(case, seed):
    n, p, q, d = case
    prm = validate_params(n, n * p // q, p, q, d)
    graph, trace = construct(prm, TieBreakPolicy.seeded(seed))
    assert graph.edge_count == prm.total_edges
    assert verify_phase_invariants(trace, prm).ok
