from ._wargame import (
    Agent,
    Game,
    ParseError,
    ReplayError,
    RuleError,
    Rules,
    SearchError,
    load_rules,
    nash_average,
    pareto_front,
    parse_rules,
    replay_verify,
    run_match,
    script_names,
)
