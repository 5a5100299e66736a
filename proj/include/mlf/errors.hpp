#pragma once

#include <stdexcept>
#include <string>

namespace mlf {

enum class errc {
  not_prime,
  not_eisenstein,
  precision_too_low,
  precision_loss,
  division_by_zero_at_precision,
  field_mismatch,
  not_a_unit,
  not_principal_unit,
  outside_convergence_domain,
  zero_at_precision,
  bound_exceeded,
  not_solvable,
  not_normal,
  inconsistent_inputs,
  not_in_catalog,
  empty_filtration,
  peeling_stuck,
  infinite_index_at_truncation,
  precision_mismatch,
  no_valid_tower_node,
  directory_too_shallow,
  depth_too_shallow,
  not_uniformizing,
  span_rank_deficient,
  incomparable_truncations,
  window_too_narrow,
  not_mlfab_shape,
  not_locally_algebraic,
  no_embedding,
  not_filtered,
  malformed_blob,
  usage,
  internal,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_prime: return "NotPrime";
    case errc::not_eisenstein: return "NotEisenstein";
    case errc::precision_too_low: return "PrecisionTooLow";
    case errc::precision_loss: return "PrecisionLoss";
    case errc::division_by_zero_at_precision: return "DivisionByZeroAtPrecision";
    case errc::field_mismatch: return "FieldMismatch";
    case errc::not_a_unit: return "NotAUnit";
    case errc::not_principal_unit: return "NotPrincipalUnit";
    case errc::outside_convergence_domain: return "OutsideConvergenceDomain";
    case errc::zero_at_precision: return "ZeroAtPrecision";
    case errc::bound_exceeded: return "BoundExceeded";
    case errc::not_solvable: return "NotSolvable";
    case errc::not_normal: return "NotNormal";
    case errc::inconsistent_inputs: return "InconsistentInputs";
    case errc::not_in_catalog: return "NotInCatalog";
    case errc::empty_filtration: return "EmptyFiltration";
    case errc::peeling_stuck: return "PeelingStuck";
    case errc::infinite_index_at_truncation: return "InfiniteIndexAtTruncation";
    case errc::precision_mismatch: return "PrecisionMismatch";
    case errc::no_valid_tower_node: return "NoValidTowerNode";
    case errc::directory_too_shallow: return "DirectoryTooShallow";
    case errc::depth_too_shallow: return "DepthTooShallow";
    case errc::not_uniformizing: return "NotUniformizing";
    case errc::span_rank_deficient: return "SpanRankDeficient";
    case errc::incomparable_truncations: return "IncomparableTruncations";
    case errc::window_too_narrow: return "WindowTooNarrow";
    case errc::not_mlfab_shape: return "NotMLFabShape";
    case errc::not_locally_algebraic: return "NotLocallyAlgebraic";
    case errc::no_embedding: return "NoEmbedding";
    case errc::not_filtered: return "NotFiltered";
    case errc::malformed_blob: return "MalformedBlob";
    case errc::usage: return "Usage";
    case errc::internal: return "Internal";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace mlf
