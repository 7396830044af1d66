// Copyright 2026 The lieopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LIEOPT_IO_HPP
#define LIEOPT_IO_HPP

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lieopt/closure.hpp"
#include "lieopt/dynamics.hpp"
#include "lieopt/optimizer.hpp"

namespace lieopt {

/// Basis plus structure constants, as stored on disk.
struct Algebra {
    OperatorBasis basis;
    StructureConstants constants;
    std::size_t num_generator_strings = 0;
};

/// Closure and structure constants for a generator set.
Algebra build_algebra(const GeneratorSet &gens, std::size_t max_dim = kDefaultMaxDim);

/// Text format: a header (version, n, d, d0, ordering, hashes, body digest),
/// then the ordered basis labels and one block of COO triples (l < j) per
/// generator. Reading verifies every digest and throws IntegrityError.
std::string format_algebra(const Algebra &algebra);
Algebra parse_algebra(const std::string &text);
void write_algebra(const std::filesystem::path &path, const Algebra &algebra);
Algebra read_algebra(const std::filesystem::path &path);

/// Directory cache keyed by the generator hash. Concurrent processes are
/// serialized with an exclusive flock on a per-key lock file.
class AlgebraCache {
   public:
    explicit AlgebraCache(std::filesystem::path dir);
    /// Cache named by $LIEOPT_CACHE_DIR, if set.
    static std::optional<AlgebraCache> from_environment();

    const std::filesystem::path &dir() const { return dir_; }
    std::filesystem::path path_for(const GeneratorSet &gens) const;
    /// Loads a verified entry or builds and stores one. A corrupt entry throws.
    Algebra load_or_build(const GeneratorSet &gens, std::size_t max_dim = kDefaultMaxDim, bool *hit = nullptr) const;

   private:
    std::filesystem::path dir_;
};

inline constexpr const char *kCacheEnv = "LIEOPT_CACHE_DIR";

/// Metadata written next to a pulse CSV.
struct PulseMetadata {
    std::size_t num_qubits = 0;
    std::string model;
    std::vector<std::string> generators;
    std::vector<std::size_t> drift_columns;
    std::string generator_hash;
    std::string basis_hash;
    std::string config_hash;
    std::string stage;
    double value = 0.0;
};

/// CSV with columns bin, t_start, t_end and one column per generator, plus a
/// JSON sidecar `<csv>.json` holding the metadata and the CSV digest.
void write_pulse(const std::filesystem::path &csv, const PulseSchedule &schedule, const PulseMetadata &meta);
/// Verifies the sidecar digest, bin count and duration; throws IntegrityError.
PulseSchedule read_pulse(const std::filesystem::path &csv, PulseMetadata *meta = nullptr);
std::filesystem::path sidecar_path(const std::filesystem::path &csv);

/// Step-plot export: a (time, amplitude) column pair per control with two
/// rows per bin.
void write_plot_csv(const std::filesystem::path &path, const PulseSchedule &schedule,
                    const std::vector<std::string> &labels, const std::vector<std::size_t> &drift_columns = {});

/// JSON coefficient vector with basis hash, free-form metadata and a digest.
void write_coefficients(const std::filesystem::path &path, const Eigen::VectorXd &values, const OperatorBasis &basis,
                        const std::string &metadata_json = "{}");
Eigen::VectorXd read_coefficients(const std::filesystem::path &path, const OperatorBasis &basis);

/// One JSON line of an optimization trace (no trailing newline).
std::string trace_line(const TraceRecord &record);

std::string read_text(const std::filesystem::path &path);
/// Writes via a temporary file and rename.
void write_text(const std::filesystem::path &path, const std::string &text);

}  // namespace lieopt

#endif
