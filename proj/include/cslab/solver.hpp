#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cslab/codecs.hpp"
#include "cslab/measurement.hpp"
#include "cslab/ppoly.hpp"

namespace cslab {

struct ScanOptions {
  // Index ranges the codebook is cut into; each is reduced independently and
  // the partial minima are folded in range order.
  std::size_t partitions = 1;
  // Worker threads used to process partitions (<= partitions).
  std::size_t threads = 1;
};

struct RecoveryResult {
  std::uint64_t chosen_index = 0;
  std::vector<double> reconstruction;
  double residual = 0.0;  // ||y - A c|| at the chosen codeword
  std::optional<double> error_l2;
  std::uint64_t candidates_scanned = 0;
  double wall_time = 0.0;  // seconds
};

struct AnalogRecoveryResult {
  std::uint64_t chosen_index = 0;
  PiecewisePolynomial reconstruction;
  double residual = 0.0;
  std::optional<double> error_l2;
  std::uint64_t candidates_scanned = 0;
  double wall_time = 0.0;
};

// Exhaustive CSP: argmin over the codebook of ||y - A c||_2^2, ties to the
// smallest index. The squared residual of each codeword is computed from
// scratch in a fixed order, so the answer does not depend on partitioning.
RecoveryResult csp_recover(std::span<const double> y, const MeasurementEnsemble& ensemble, const FiniteCodec& codec,
                           std::optional<std::span<const double>> truth = std::nullopt, ScanOptions options = {});

AnalogRecoveryResult csp_recover_analog(std::span<const double> y, const WienerEnsemble& ensemble,
                                        const PpolyCodec& codec, const PiecewisePolynomial* truth = nullptr,
                                        ScanOptions options = {});

// ||y - A c||_2 for one codeword; the same arithmetic the scan uses.
double residual_norm(std::span<const double> y, const MeasurementEnsemble& ensemble, std::span<const double> c);

}  // namespace cslab
