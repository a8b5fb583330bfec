"""Fixed vocabulary of rule tags attached to emitted verdicts.

Every verdict in a report cites at least one tag naming the decision
rule that produced it; downstream tooling keys on these exact strings.
"""

RULE_SIP = "Def-1.1"            # semi-inner-product / norming-functional machinery
RULE_SUBSEQ = "Thm-2.1"         # subsequential sip-limit characterization
RULE_ATTAIN = "Thm-2.2"         # unique-attainment + smooth-image criterion
RULE_HILBERT = "Thm-2.3"        # restricted-norm gap criterion (Hilbert case)
RULE_TRANSFER = "Thm-3.4"       # orthogonality transfer to the attaining direction
RULE_CONCENTRATION = "Thm-3.5"  # norming-sequence concentration sufficiency
RULE_SPAN = "Thm-3.7"           # span-closure necessary condition
RULE_DIFF = "Thm-3.8"           # directional/uniform differentiability link
RULE_FIXTURE_ACCUMULATING = "Ex-1"  # accumulating-spectrum diagonal fixture
RULE_FIXTURE_GAPPED = "Ex-2"        # gapped-spectrum diagonal fixture
RULE_PLUMBING = "plumbing"      # definitional or infrastructure computation

TAG_SET = frozenset(
    {
        RULE_SIP,
        RULE_SUBSEQ,
        RULE_ATTAIN,
        RULE_HILBERT,
        RULE_TRANSFER,
        RULE_CONCENTRATION,
        RULE_SPAN,
        RULE_DIFF,
        RULE_FIXTURE_ACCUMULATING,
        RULE_FIXTURE_GAPPED,
        RULE_PLUMBING,
    }
)
