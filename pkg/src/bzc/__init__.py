"""bzc: lossless two-part coding for Bernoulli bit sequences and
Erdos-Renyi style random graphs, with exact length analysis."""

from .bitio import BitReader, Bits, BitWriter, ContainerHeader
from .codec import (
    BernoulliModel,
    codeword_length,
    compress_bits,
    decode_blocks,
    decode_sequence,
    decompress_bits,
    encode_blocks,
    encode_sequence,
)
from .combinatorics import binomial, rank, rank_bit_width, unrank
from .countcode import (
    CountCode,
    CountCodeParams,
    count_code_length,
    count_parts,
    decode_count,
    derive_params,
    encode_count,
)
from .graph import (
    Graph,
    bits_to_graph,
    decode_graph,
    encode_graph,
    format_edgelist,
    graph_to_bits,
    parse_edgelist,
)

__version__ = "0.1.0"

__all__ = [
    "BernoulliModel",
    "BitReader",
    "Bits",
    "BitWriter",
    "ContainerHeader",
    "CountCode",
    "CountCodeParams",
    "Graph",
    "binomial",
    "bits_to_graph",
    "codeword_length",
    "compress_bits",
    "count_code_length",
    "count_parts",
    "decode_blocks",
    "decode_count",
    "decode_graph",
    "decode_sequence",
    "decompress_bits",
    "derive_params",
    "encode_blocks",
    "encode_count",
    "encode_graph",
    "encode_sequence",
    "format_edgelist",
    "graph_to_bits",
    "parse_edgelist",
    "rank",
    "rank_bit_width",
    "unrank",
    "__version__",
]
