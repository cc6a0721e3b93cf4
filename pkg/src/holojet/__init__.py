"""Jet spaces, integral lifts, zig-zags, and holonomic approximation.

The package splits along the pipeline: `jet` holds the space itself
(signatures, sampled maps, formal sections, Cartan residuals), `lift`
reconstructs integral maps from principal or metasymplectic data,
`models` samples the singularity zoo, `zigzag` builds bump functions and
swallowtail families, `approx` interpolates and approximates
holonomically, `verify` measures everything, and `fileio`/`svg`/`cli`
move results in and out.
"""
from __future__ import annotations

from .approx import (AnnulusRegion, CircleApproximation, Framing,
                     InterpolationResult, ParamInterpolation, framing,
                     holonomic_approx_circle, interpolate, interpolate_param,
                     multiply, push)
from .fileio import (jet_header, read_jet_csv, write_jet_csv,
                     write_principal_csv, write_report)
from .front import MultiSection, concatenate, from_sampled
from .jet import (CartanResidual, Circle, Disc, FormalSection, Interval,
                  JetPoint, JetSignature, SampledJetMap, apply_point_symmetry,
                  c0_distance, cartan_residual, cr_norm, prolong)
from .lift import (InitialDatum, MetasymplecticSample, PrincipalSample,
                   lift_curve, lift_isotropic_disc, lift_principal,
                   metasymplectic_pairing, metasymplectic_projection,
                   principal_projection)
from .models import (KINDS, ModelDescriptor, ModelOutput, build_model,
                     normalize_kind, reidemeister_family, stabilise)
from .multiindex import (block_count, bump_level, degree,
                         enumerate_multiindices, index_position, jet_indices,
                         k1_constant, k2_constant)
from .sections import (CombinedSection, ConstSection, PolySection,
                       Polynomial, SectionLike, TaylorSection, TrigSection,
                       combine, zero_section)
from .svg import SvgStyle, emit_svg
from .verify import (EmbeddingReport, ScalingFit, TangencyLocus,
                     VerificationReport, check_embedding,
                     classify_configuration, detect_tangency_locus,
                     fit_scaling, verify_sample)
from .zigzag import (InfiniteZigZag, SwallowtailFamily, ZigZagBump,
                     build_bump, build_infinite_zigzag,
                     build_swallowtail_family, measure_derivative_bound)

__version__ = "0.1.0"

__all__ = [
    "AnnulusRegion", "CartanResidual", "Circle", "CircleApproximation",
    "CombinedSection", "ConstSection", "Disc", "EmbeddingReport",
    "FormalSection", "Framing", "InfiniteZigZag", "InitialDatum",
    "InterpolationResult",
    "Interval", "JetPoint", "JetSignature", "KINDS", "MetasymplecticSample",
    "ModelDescriptor", "ModelOutput", "MultiSection", "ParamInterpolation",
    "PolySection", "Polynomial", "PrincipalSample", "SampledJetMap",
    "ScalingFit", "SectionLike", "SvgStyle", "SwallowtailFamily",
    "TangencyLocus", "TaylorSection", "TrigSection", "VerificationReport",
    "ZigZagBump", "apply_point_symmetry", "block_count", "build_bump",
    "build_infinite_zigzag", "build_model", "build_swallowtail_family",
    "bump_level", "c0_distance",
    "cartan_residual", "check_embedding", "classify_configuration",
    "combine", "concatenate", "cr_norm", "degree", "detect_tangency_locus",
    "emit_svg", "enumerate_multiindices", "fit_scaling", "framing",
    "from_sampled",
    "holonomic_approx_circle", "index_position", "interpolate",
    "interpolate_param", "jet_header", "jet_indices", "k1_constant",
    "k2_constant", "lift_curve", "lift_isotropic_disc", "lift_principal",
    "measure_derivative_bound", "metasymplectic_pairing",
    "metasymplectic_projection", "multiply",
    "normalize_kind", "principal_projection", "prolong", "push",
    "read_jet_csv", "reidemeister_family", "stabilise", "verify_sample",
    "write_jet_csv", "write_principal_csv", "write_report", "zero_section",
]
