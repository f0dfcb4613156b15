"""b-colourings, b-spectra and colour-descent constructions on lexicographic graph products."""

from .coloring import Coloring, is_b_coloring, is_miss1_b_coloring, is_proper
from .exact import Status, b_chromatic_number, b_spectrum, chromatic_number, exists_b_coloring
from .graph import Graph, is_chordal, is_p4_sparse, m_degree_bound, parse_dimacs, write_dimacs
from .lexprod import blow_up, lex_product

__all__ = [
    "Coloring",
    "Graph",
    "Status",
    "b_chromatic_number",
    "b_spectrum",
    "blow_up",
    "chromatic_number",
    "exists_b_coloring",
    "is_b_coloring",
    "is_chordal",
    "is_miss1_b_coloring",
    "is_p4_sparse",
    "is_proper",
    "lex_product",
    "m_degree_bound",
    "parse_dimacs",
    "write_dimacs",
]
