from .__about__ import __version__ as __version__
from .evaluation import (
    OnlineProblem as OnlineProblem,
    evaluate as evaluate,
    precision as precision,
)
from .landmarks import (
    Category as Category,
    Landmark as Landmark,
    LandmarkSet as LandmarkSet,
    extract_exhaustive as extract_exhaustive,
    extract_hm as extract_hm,
    extract_rhw as extract_rhw,
    oracle_landmarks as oracle_landmarks,
)
from .pddl import (
    ground as ground,
    load_bundle as load_bundle,
    parse_domain as parse_domain,
    parse_problem as parse_problem,
)
from .planning import (
    Action as Action,
    Fact as Fact,
    GroundedProblem as GroundedProblem,
    apply as apply,
    validate_plan as validate_plan,
)
from .recognition import (
    RecognitionConfig as RecognitionConfig,
    recognize as recognize,
)
from .util import set_log_level

set_log_level()
