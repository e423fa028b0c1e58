from enum import Enum

# Sequent calculus rules
class LrRule(str, Enum):
    ID = "Id"
    CONTRACTION = "C"
    IMP_L = "ImpL"
    IMP_R = "ImpR"
    TRUTH_L = "TruthL"
    TRUTH_R = "TruthR"
    FUSION_L = "FusL"
    FUSION_R = "FusR"

# Focusing calculus rules
class FrRule(str, Enum):
    ATOMIC_ID = "AtomicId"
    FOCUS = "Focus"
    CONTRACTION = "Cf"
    IMP_L = "ImpLf"
    IMP_R = "ImpRf"

# Deduction tree steps
class StepKind(str, Enum):
    LEAF = "Leaf"
    UNARY = "Unary"
    SPLIT = "Split"
    EXPANSION = "Expansion"

class Mode(str, Enum):
    PLAIN = "plain"
    EXPANSIVE = "expansive"
    COMPREHENSIVE = "comprehensive"

class Calculus(str, Enum):
    LR = "lr"
    FR = "fr"

class TranslationKind(str, Enum):
    FORMULA_TO_BVASS = "formula-to-bvass"
    EXP_TO_COV = "exp-to-cov"
    COV_TO_COMPR = "cov-to-compr"
    COMPR_TO_FORMULA = "compr-to-formula"
    BVASS_TO_BVAS = "bvass-to-bvas"
    BVAS_TO_BVASS = "bvas-to-bvass"
    TO_ORDINARY = "to-ordinary"

class Verdict(str, Enum):
    PROVABLE = "PROVABLE"
    NOT_PROVABLE = "NOT_PROVABLE"
    NOT_PROVABLE_WITHIN_DEPTH = "NOT_PROVABLE_WITHIN_DEPTH"
    WITNESS = "WITNESS"
    NOT_FOUND_WITHIN_CAP = "NOT_FOUND_WITHIN_CAP"

    @property
    def positive(self) -> bool:
        return self in (Verdict.PROVABLE, Verdict.WITNESS)

class Agreement(str, Enum):
    AGREE = "AGREE"
    DISAGREE = "DISAGREE"
    # the cap or the node budget was too small to compare
    UNDECIDED = "UNDECIDED"
