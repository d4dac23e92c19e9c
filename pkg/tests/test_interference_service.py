# tests/test_interference_service.py
"""Tests for scenario enumeration, classification, channels and symmetry reduction"""

import pytest
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from unittest.mock import patch

from conftest import parse_ok
from models.diagnostics import PmlError
from models.platform import SymmetryClass
from services.interference_service import (
    Scenario, ScenarioKind, channels, classify, quotient, scenarios, validate_symmetry
)

# t1 and t2 share X and M, t3 is disjoint from both
OVERLAP_SOURCE = """
platform Overlap {
  initiator A;
  initiator B;
  initiator C;
  transporter X;
  transporter Y;
  target M { service load; }
  target N { service load; }
  link A -> X;
  link B -> X;
  link C -> Y;
  link X -> M;
  link Y -> N;
  application a { transaction t1: A -> X -> M uses load rate 1/s size 8 B; }
  application b { transaction t2: B -> X -> M uses load rate 1/s size 8 B; }
  application c { transaction t3: C -> Y -> N uses load rate 1/s size 8 B; }
}
"""

TWO_BY_THREE_SOURCE = """
platform Pairs {
  initiator A;
  initiator B;
  initiator C;
  transporter BUS;
  target M { service load, store; }
  link A -> BUS;
  link B -> BUS;
  link C -> BUS;
  link BUS -> M;
  application a0 { transaction r: A -> BUS -> M uses load; }
  application a1 { transaction w: A -> BUS -> M uses store; }
  application b0 { transaction r: B -> BUS -> M uses load; }
  application b1 { transaction w: B -> BUS -> M uses store; }
  application c0 { transaction r: C -> BUS -> M uses load; }
  application c1 { transaction w: C -> BUS -> M uses store; }
}
"""

SMALL_GPU_SOURCE = """
platform SmallGpu {
  initiator CPU;
  initiator SM0;
  initiator SM1;
  transporter FAB;
  target DRAM { service load; }
  link CPU -> FAB;
  link SM0 -> FAB;
  link SM1 -> FAB;
  link FAB -> DRAM;
  symmetry GPU { SM0, SM1 }
  application host { transaction work: CPU -> FAB -> DRAM uses load rate 10/s size 64 B; }
  application g0 { transaction load_DRAM: SM0 -> FAB -> DRAM uses load rate 100/s size 128 B; }
  application g1 { transaction load_DRAM: SM1 -> FAB -> DRAM uses load rate 100/s size 128 B; }
}
"""

SCRATCH_SOURCE = """
platform Scratch {
  initiator A;
  initiator B;
  transporter BUS;
  target M { service load; }
  target Pad { service load; }
  link A -> BUS;
  link B -> BUS;
  link BUS -> M;
  link A -> Pad;
  symmetry S { A, B }
  application a { transaction t: A -> BUS -> M uses load; }
  application b { transaction t: B -> BUS -> M uses load; }
}
"""

# a.t and b.t leave C0 with the same footprint
FOOTPRINT_SOURCE = """
platform Footprint {
  initiator C0;
  initiator C1;
  transporter X;
  target M { service load; }
  link C0 -> X;
  link C1 -> X;
  link X -> M;
  application a { transaction t: C0 -> X -> M uses load rate 1/s size 8 B; }
  application b { transaction t: C0 -> X -> M uses load rate 1/s size 8 B; }
  application c { transaction t: C1 -> X -> M uses load rate 1/s size 8 B; }
}
"""

# bad is headed by a transporter and fails the path checks
REJECTED_SOURCE = """
platform Rejected {
  initiator C1;
  transporter BUS;
  target DDR { service load; }
  link C1 -> BUS;
  link BUS -> DDR;
  application a { transaction bad: BUS -> DDR uses load rate 1000/s size 64 B; }
  application b { transaction ok: C1 -> BUS -> DDR uses load rate 1/s size 1 B; }
}
"""

SMS = [f"SM{i}" for i in range(8)]


def by_initiators(scs):
    return {tuple(s.initiators): s for s in scs}


class TestScenario:
    """Test the scenario value"""

    def test_needs_two_transactions(self, keystone):
        """Test that a single transaction is not a scenario"""
        with pytest.raises(ValueError):
            Scenario((keystone.transactions()[0],))

    def test_distinct_initiators(self):
        """Test that two transactions of one initiator are rejected"""
        platform = parse_ok(TWO_BY_THREE_SOURCE)
        first, second = platform.application('a0').transactions[0], platform.application('a1').transactions[0]
        with pytest.raises(ValueError):
            Scenario((first, second))

    def test_ordered_by_initiator(self, keystone):
        """Test that transactions are kept in initiator order"""
        txns = {t.initiator: t for t in keystone.transactions()}
        scenario = Scenario((txns['DSP3'], txns['ARMPack.A15_1']))
        assert scenario.initiators == ['ARMPack.A15_1', 'DSP3']


class TestScenarios:
    """Test scenario enumeration"""

    def test_single_initiator(self):
        """Test that one transaction-carrying initiator yields no pair"""
        platform = parse_ok(
            'platform P { initiator C0; target M { service load; } link C0 -> M; '
            'application a { transaction t: C0 -> M uses load; } }'
        )
        assert scenarios(platform, 2) == []

    def test_keystone_pairs(self, keystone):
        """Test C(6,2) pairs on Keystone"""
        assert len(scenarios(keystone, 2)) == 15

    def test_two_transactions_per_initiator(self):
        """Test C(3,2) x 2 x 2 pairs"""
        assert len(scenarios(parse_ok(TWO_BY_THREE_SOURCE), 2)) == 12

    def test_triples(self):
        """Test scenario size 3"""
        assert len(scenarios(parse_ok(TWO_BY_THREE_SOURCE), 3)) == 8

    def test_n_too_large(self, keystone):
        """Test that n beyond the initiator count yields nothing"""
        assert scenarios(keystone, 7) == []

    def test_bad_n(self, keystone):
        """Test E_BAD_N"""
        with pytest.raises(PmlError) as e:
            scenarios(keystone, 1)
        assert e.value.code == 'E_BAD_N'

    def test_same_app_exclusion(self):
        """Test that two transactions of one application are excluded by default"""
        platform = parse_ok("""
platform P {
  initiator C0;
  initiator C1;
  target M { service load; }
  link C0 -> M;
  link C1 -> M;
  application a {
    transaction t0: C0 -> M uses load;
    transaction t1: C1 -> M uses load;
  }
}
""")
        assert scenarios(platform, 2) == []
        assert len(scenarios(platform, 2, same_app_exclusion=False)) == 1

    def test_initiator_restriction(self, xavier):
        """Test restricting the initiators considered"""
        assert len(scenarios(xavier, 2, initiators=SMS)) == 28

    def test_unknown_initiator_restriction(self, xavier):
        """Test E_UNKNOWN_COMPONENT for an unknown restriction"""
        with pytest.raises(PmlError) as e:
            scenarios(xavier, 2, initiators=['SM9'])
        assert e.value.code == 'E_UNKNOWN_COMPONENT'

    def test_deterministic_order(self, keystone):
        """Test that enumeration order is stable"""
        first = [s.keys for s in scenarios(keystone, 2)]
        assert first == [s.keys for s in scenarios(keystone, 2)]
        assert first[0] == ['display.frame', 'monitor.log']

    def test_rejected_transactions_left_out(self):
        """Test that a transaction failing the path checks heads no scenario"""
        assert scenarios(parse_ok(REJECTED_SOURCE), 2) == []

    def test_scenario_limit(self):
        """Test E_BAD_N instead of a truncated enumeration"""
        platform = parse_ok(TWO_BY_THREE_SOURCE)
        with patch('services.interference_service.Config.MAX_SCENARIOS', 5):
            with pytest.raises(PmlError) as e:
                scenarios(platform, 2)
        assert e.value.code == 'E_BAD_N'

    def test_scenario_limit_reached_exactly(self):
        """Test that a count equal to the limit is enumerated in full"""
        with patch('services.interference_service.Config.MAX_SCENARIOS', 12):
            assert len(scenarios(parse_ok(TWO_BY_THREE_SOURCE), 2)) == 12


class TestClassify:
    """Test itf / free / partial classification"""

    def test_keystone_itf(self, keystone):
        """Test that A15_0 and DSP0 interfere on MSMC and DDR"""
        pair = by_initiators(scenarios(keystone, 2))[('ARMPack.A15_0', 'DSP0')]
        classification = classify(pair)
        assert classification.kind == ScenarioKind.ITF
        assert {'MSMC', 'DDR'} <= set(classification.channel)

    def test_free(self):
        """Test that disjoint paths are free"""
        pair = by_initiators(scenarios(parse_ok(OVERLAP_SOURCE), 2))[('A', 'C')]
        classification = classify(pair)
        assert classification.kind == ScenarioKind.FREE
        assert classification.channel == ()

    def test_partial(self):
        """Test that overlap among some members only is partial"""
        triple = scenarios(parse_ok(OVERLAP_SOURCE), 3)[0]
        classification = classify(triple)
        assert classification.kind == ScenarioKind.PARTIAL
        assert classification.overlaps == ((('a.t1', 'b.t2'), ('M', 'X')),)

    def test_to_dict(self, keystone):
        """Test the serialized classification"""
        pair = scenarios(keystone, 2)[0]
        assert classify(pair).to_dict() == {'kind': 'itf', 'channel': ['DDR', 'MSMC']}


class TestChannels:
    """Test the component to scenario map"""

    def test_nvdla_large_dbbif(self, nvdla_large):
        """Test that DBBIF carries the three functional block pairs"""
        found = channels(nvdla_large, 2)
        assert len(found['DBBIF']) == 3
        blocks = {tuple(s.initiators) for s in found['DBBIF']}
        assert blocks == {('CONV', 'PDP'), ('CONV', 'SDP'), ('PDP', 'SDP')}

    def test_single_initiator(self, chain):
        """Test that a platform without pairs has no channel"""
        assert channels(chain, 2) == {}

    def test_xavier_cpu_gpu(self, xavier):
        """Test that main memory carries CPU x GPU pairs"""
        dram = channels(xavier, 2)['DRAM']
        assert len(dram) == 45
        assert any(set(s.initiators) == {'Carmel.Core0', 'SM3'} for s in dram)

    def test_sorted_keys(self, keystone):
        """Test that components are ordered by id"""
        assert list(channels(keystone, 2)) == ['DDR', 'MSMC', 'TeraNet']

    def test_bad_n_max(self, keystone):
        """Test E_BAD_N"""
        with pytest.raises(PmlError) as e:
            channels(keystone, 1)
        assert e.value.code == 'E_BAD_N'


class TestValidateSymmetry:
    """Test the automorphism check of symmetry classes"""

    def test_volta_sms(self, xavier):
        """Test that the 8 SMs form a valid class"""
        volta = xavier.symmetries[0]
        assert len(volta.members) == 8
        assert validate_symmetry(xavier, volta) == []

    def test_private_scratchpad(self):
        """Test that a link only one member has is the witness"""
        platform = parse_ok(SCRATCH_SOURCE)
        diagnostics = validate_symmetry(platform, platform.symmetries[0])
        assert [d.code for d in diagnostics] == ['E_NOT_SYMMETRIC']
        assert 'A -> Pad' in diagnostics[0].message

    def test_capacity_differs(self):
        """Test that members must share capacity"""
        platform = parse_ok("""
platform P {
  initiator C0;
  transporter X { capacity 10 Bps; }
  transporter Y { capacity 20 Bps; }
  target M { service load; }
  link C0 -> X;
  link C0 -> Y;
  link X -> M;
  link Y -> M;
  symmetry Buses { X, Y }
}
""")
        diagnostics = validate_symmetry(platform, platform.symmetries[0])
        assert 'capacity' in diagnostics[0].message

    def test_overlapping_classes(self):
        """Test that classes sharing a member are rejected"""
        platform = parse_ok("""
platform P {
  initiator A;
  initiator B;
  initiator C;
  target M { service load; }
  link A -> M;
  link B -> M;
  link C -> M;
  symmetry S1 { A, B }
  symmetry S2 { B, C }
}
""")
        diagnostics = validate_symmetry(platform, platform.symmetries[0])
        assert diagnostics[0].code == 'E_NOT_SYMMETRIC'
        assert 'overlaps' in diagnostics[0].message

    def test_unknown_member(self, chain):
        """Test that an unknown member is reported"""
        diagnostics = validate_symmetry(chain, SymmetryClass('S', ('C0', 'C9')))
        assert diagnostics[0].code == 'E_UNKNOWN_COMPONENT'


class TestQuotient:
    """Test scenario orbits"""

    def test_xavier_sms_single_orbit(self, xavier):
        """Test that the 28 SM pairs form one orbit"""
        scs = scenarios(xavier, 2, initiators=SMS)
        orbits = quotient(xavier, scs)
        assert len(orbits) == 1
        assert orbits[0].size == 28
        assert orbits[0].representative.initiators == ['SM0', 'SM1']

    def test_xavier_all_pairs(self, xavier):
        """Test the orbits of every pair on Xavier"""
        scs = scenarios(xavier, 2)
        orbits = quotient(xavier, scs)
        assert len(scs) == 45
        assert [o.size for o in orbits] == [1, 8, 8, 28]
        assert sum(o.size for o in orbits) == len(scs)

    def test_two_sms_and_cpu(self):
        """Test that {SMi, CPU} pairs form one orbit of size 2"""
        platform = parse_ok(SMALL_GPU_SOURCE)
        orbits = quotient(platform, scenarios(platform, 2))
        assert [(o.representative.initiators, o.size) for o in orbits] == [
            (['CPU', 'SM0'], 2),
            (['SM0', 'SM1'], 1)
        ]

    def test_no_symmetry(self, keystone):
        """Test that without classes every scenario is its own orbit"""
        scs = scenarios(keystone, 2)
        orbits = quotient(keystone, scs)
        assert len(orbits) == 15
        assert all(o.size == 1 for o in orbits)

    def test_identical_footprints_without_symmetry(self):
        """Test that two applications with one footprint stay separate orbits"""
        platform = parse_ok(FOOTPRINT_SOURCE)
        scs = scenarios(platform, 2)
        assert [s.keys for s in scs] == [['a.t', 'c.t'], ['b.t', 'c.t']]
        orbits = quotient(platform, scs)
        assert [o.size for o in orbits] == [1, 1]
        assert [o.representative.keys for o in orbits] == [['a.t', 'c.t'], ['b.t', 'c.t']]

    def test_identical_footprints_with_symmetry(self):
        """Test that orbits follow the swapped transactions, not their footprints"""
        platform = parse_ok(
            FOOTPRINT_SOURCE.rstrip().rstrip('}')
            + '  application d { transaction t: C1 -> X -> M uses load rate 1/s size 8 B; }\n'
            + '  symmetry Cores { C0, C1 }\n}\n'
        )
        orbits = quotient(platform, scenarios(platform, 2))
        assert [(o.representative.keys, o.size) for o in orbits] == [
            (['a.t', 'c.t'], 1),
            (['a.t', 'd.t'], 2),
            (['b.t', 'd.t'], 1)
        ]
        assert [m.keys for m in orbits[1].members] == [['a.t', 'd.t'], ['b.t', 'c.t']]

    def test_classification_constant_on_orbits(self, xavier):
        """Test that symmetric scenarios classify identically"""
        for orbit in quotient(xavier, scenarios(xavier, 2)):
            kinds = {classify(member).kind for member in orbit.members}
            assert len(kinds) == 1

    def test_invalid_symmetry(self):
        """Test E_UNVALIDATED_SYMMETRY"""
        platform = parse_ok(SCRATCH_SOURCE)
        with pytest.raises(PmlError) as e:
            quotient(platform, scenarios(platform, 2))
        assert e.value.code == 'E_UNVALIDATED_SYMMETRY'
