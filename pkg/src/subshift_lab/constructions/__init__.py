"""Concrete generators: grid and diamond tile sets, doubling-gap chain
configurations, poset-embedding configurations, counter-machine cones."""

from .base import ConfigurationWindow, window_to_text, window_from_text
from .grid import grid_shift, grid_config, grid_symbol, GRID_SYMBOLS
from .diamond import (
    diamond_shift, diamond_config, diamond_symbol, DIAMOND_SYMBOLS,
    ISOLATION_PROBE, CONTINUATION_PROBE, island_factor_ok,
)
from .chain import (
    powers_of_two_forbidden, powers_of_two_graph, chain_point, verify_chain,
)
from .posets import (
    Poset, PosetStats, make_poset, poset_stats, phi, poset_config,
    verify_embedding, poset_from_json, poset_to_json,
)
from .counter import (
    CounterMachineSpec, make_machine, machine_from_json, machine_to_json,
    cm_step, cone_render, doubling_machine, trivial_machine,
    guess_loop_machine, run_guess_loop, read_cone_trace,
)
