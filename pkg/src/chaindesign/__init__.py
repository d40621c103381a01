"""Flag-transitive 2-designs on chains of nested point partitions.

Construction, enumeration, parameter search and independent verification
of designs whose automorphism group preserves every partition in a chain;
the heavy enumeration and orbit closures run on compiled mask kernels
when the extension is built, with a pure-Python fallback.
"""

from chaindesign.chain import (
    ArrayFunction,
    ChainPermutation,
    ChainSpec,
    ClassId,
    array_of,
    class_of,
    classes_meeting,
    parent_class,
    parse_chain,
    parse_point,
    permute_array,
)
from chaindesign.designs import (
    Block,
    DesignSpec,
    block_count,
    canonical_block,
    collapse_chain,
    design_spec,
    enumerate_blocks,
    family_params,
    is_uniform,
)
from chaindesign.feasibility import (
    FeasibilityReport,
    UniformSequence,
    arithmetic_facts,
    check_ft,
    search_k,
    y_sequence,
)
from chaindesign.search import SearchRow, emit_table, search
from chaindesign.verify import (
    VerificationCertificate,
    brute_force_pair_count,
    certify_flag_transitive,
    certify_uniqueness,
    check_2design_arrays,
    verify_design,
)
from chaindesign.wreath import (
    Flag,
    GeneratorSet,
    orbit,
    stabilizer_transitive_on_block,
    wreath_generators,
    wreath_order,
)

__version__ = "0.1.0"
