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

#include "lieopt/io.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <tuple>

#include "lieopt/errors.hpp"
#include "lieopt/hash.hpp"

namespace lieopt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char *kAlgebraMagic = "lieopt-structure-constants";
constexpr int kAlgebraVersion = 1;
constexpr const char *kOrdering = "bfs-canonical";

double parse_number(const std::string &text, const std::string &what) {
    try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception &) {
        throw IntegrityError("malformed " + what + " '" + text + "'");
    }
}

std::size_t parse_count(const std::string &text, const std::string &what) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument("trailing");
        return static_cast<std::size_t>(v);
    } catch (const std::exception &) {
        throw IntegrityError("malformed " + what + " '" + text + "'");
    }
}

// RAII exclusive flock.
class FileLock {
   public:
    explicit FileLock(const fs::path &path) {
        fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
        if (fd_ < 0) throw Error("cannot open lock file " + path.string());
        if (::flock(fd_, LOCK_EX) != 0) {
            ::close(fd_);
            throw Error("cannot lock " + path.string());
        }
    }
    ~FileLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    FileLock(const FileLock &) = delete;
    FileLock &operator=(const FileLock &) = delete;

   private:
    int fd_ = -1;
};

}  // namespace

std::string read_text(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path &path, const std::string &text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
        if (!out.flush()) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

Algebra build_algebra(const GeneratorSet &gens, std::size_t max_dim) {
    Algebra a;
    a.basis = generate_closure(gens, std::nullopt, max_dim);
    a.constants = structure_constants(a.basis, gens);
    a.num_generator_strings = gens.strings().size();
    return a;
}

std::string format_algebra(const Algebra &algebra) {
    std::ostringstream body;
    body << "basis\n";
    for (const auto &p : algebra.basis.elements()) body << p.label() << '\n';
    const auto &sc = algebra.constants;
    for (std::size_t k = 0; k < sc.num_generators(); ++k) {
        std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> upper;
        const SparseMatrix &m = sc.k_matrices[k];
        for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
            for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
                if (it.row() < it.col()) upper.emplace_back(it.row(), it.col(), it.value());
            }
        }
        body << "generator " << k << ' ' << upper.size() << '\n';
        for (const auto &[l, j, v] : upper) body << l << ' ' << j << ' ' << format_double(v) << '\n';
    }
    const std::string text = body.str();
    std::ostringstream out;
    out << kAlgebraMagic << ' ' << kAlgebraVersion << '\n'
        << "n " << sc.num_qubits << '\n'
        << "d " << sc.dim << '\n'
        << "d0 " << algebra.num_generator_strings << '\n'
        << "generators " << sc.num_generators() << '\n'
        << "ordering " << kOrdering << '\n'
        << "generator_hash " << sc.generator_hash << '\n'
        << "basis_hash " << sc.basis_hash << '\n'
        << "body_sha256 " << sha256_hex(text) << '\n'
        << "---\n"
        << text;
    return out.str();
}

Algebra parse_algebra(const std::string &text) {
    const std::size_t sep = text.find("\n---\n");
    if (sep == std::string::npos) throw IntegrityError("structure-constant file has no header separator");
    std::istringstream header(text.substr(0, sep));
    const std::string body = text.substr(sep + 5);
    std::map<std::string, std::string> fields;
    std::string line;
    std::getline(header, line);
    if (line != std::string(kAlgebraMagic) + ' ' + std::to_string(kAlgebraVersion)) {
        throw IntegrityError("unsupported structure-constant header '" + line + "'");
    }
    while (std::getline(header, line)) {
        const auto space = line.find(' ');
        if (space == std::string::npos) throw IntegrityError("malformed header line '" + line + "'");
        fields[line.substr(0, space)] = line.substr(space + 1);
    }
    for (const char *key : {"n", "d", "d0", "generators", "ordering", "generator_hash", "basis_hash", "body_sha256"}) {
        if (!fields.contains(key)) throw IntegrityError(std::string("structure-constant header lacks '") + key + "'");
    }
    if (fields["ordering"] != kOrdering) throw IntegrityError("unknown basis ordering '" + fields["ordering"] + "'");
    if (sha256_hex(body) != fields["body_sha256"]) throw IntegrityError("structure-constant body digest mismatch");

    Algebra a;
    const std::size_t n = parse_count(fields["n"], "n");
    const std::size_t d = parse_count(fields["d"], "d");
    const std::size_t ng = parse_count(fields["generators"], "generator count");
    a.num_generator_strings = parse_count(fields["d0"], "d0");
    std::istringstream in(body);
    std::getline(in, line);
    if (line != "basis") throw IntegrityError("expected basis section");
    std::vector<PauliString> elements;
    elements.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
        if (!std::getline(in, line)) throw IntegrityError("truncated basis section");
        PauliString p = PauliString::parse(line);
        if (p.num_qubits() != n) throw IntegrityError("basis label has wrong length");
        elements.push_back(p);
    }
    a.basis = OperatorBasis(n, std::move(elements));
    if (a.basis.content_hash() != fields["basis_hash"]) throw IntegrityError("basis hash mismatch");
    auto &sc = a.constants;
    sc.num_qubits = n;
    sc.dim = d;
    sc.generator_hash = fields["generator_hash"];
    sc.basis_hash = fields["basis_hash"];
    for (std::size_t k = 0; k < ng; ++k) {
        std::string tag;
        std::size_t index = 0, count = 0;
        if (!(in >> tag >> index >> count) || tag != "generator" || index != k) {
            throw IntegrityError("malformed generator block " + std::to_string(k));
        }
        std::vector<Eigen::Triplet<double>> triplets;
        triplets.reserve(2 * count);
        for (std::size_t e = 0; e < count; ++e) {
            std::string ls, js, vs;
            if (!(in >> ls >> js >> vs)) throw IntegrityError("truncated generator block " + std::to_string(k));
            const auto l = static_cast<Eigen::Index>(parse_count(ls, "row"));
            const auto j = static_cast<Eigen::Index>(parse_count(js, "column"));
            const double v = parse_number(vs, "value");
            if (l >= j || static_cast<std::size_t>(j) >= d) throw IntegrityError("structure-constant index out of range");
            triplets.emplace_back(l, j, v);
            triplets.emplace_back(j, l, -v);
        }
        SparseMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        m.setFromTriplets(triplets.begin(), triplets.end());
        m.makeCompressed();
        sc.k_matrices.push_back(std::move(m));
    }
    return a;
}

void write_algebra(const fs::path &path, const Algebra &algebra) { write_text(path, format_algebra(algebra)); }

Algebra read_algebra(const fs::path &path) { return parse_algebra(read_text(path)); }

AlgebraCache::AlgebraCache(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

std::optional<AlgebraCache> AlgebraCache::from_environment() {
    const char *dir = std::getenv(kCacheEnv);
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return AlgebraCache(dir);
}

fs::path AlgebraCache::path_for(const GeneratorSet &gens) const { return dir_ / (gens.content_hash() + ".sc"); }

Algebra AlgebraCache::load_or_build(const GeneratorSet &gens, std::size_t max_dim, bool *hit) const {
    const fs::path path = path_for(gens);
    fs::path lock_path = path;
    lock_path += ".lock";
    FileLock lock(lock_path);
    if (fs::exists(path)) {
        Algebra a = read_algebra(path);
        if (a.constants.generator_hash != gens.content_hash()) throw IntegrityError("cache entry " + path.string() + " belongs to other generators");
        if (hit) *hit = true;
        return a;
    }
    Algebra a = build_algebra(gens, max_dim);
    write_algebra(path, a);
    if (hit) *hit = false;
    return a;
}

fs::path sidecar_path(const fs::path &csv) {
    fs::path p = csv;
    p += ".json";
    return p;
}

void write_pulse(const fs::path &csv, const PulseSchedule &schedule, const PulseMetadata &meta) {
    if (meta.generators.size() != schedule.num_generators()) throw DimensionError("pulse metadata lists the wrong number of generators");
    std::ostringstream out;
    out << "bin,t_start,t_end";
    for (const auto &g : meta.generators) out << ',' << g;
    out << '\n';
    for (std::size_t l = 0; l < schedule.bins(); ++l) {
        out << l << ',' << format_double(schedule.dt * static_cast<double>(l)) << ','
            << format_double(schedule.dt * static_cast<double>(l + 1));
        for (std::size_t k = 0; k < schedule.num_generators(); ++k) {
            out << ',' << format_double(schedule.amplitudes(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)));
        }
        out << '\n';
    }
    const std::string text = out.str();
    json side = {
        {"format", "lieopt-pulse"},
        {"version", 1},
        {"n", meta.num_qubits},
        {"model", meta.model},
        {"bins", schedule.bins()},
        {"dt", schedule.dt},
        {"duration", schedule.duration()},
        {"generators", meta.generators},
        {"drift_columns", meta.drift_columns},
        {"generator_hash", meta.generator_hash},
        {"basis_hash", meta.basis_hash},
        {"config_hash", meta.config_hash},
        {"stage", meta.stage},
        {"value", meta.value},
        {"csv_sha256", sha256_hex(text)},
    };
    write_text(csv, text);
    write_text(sidecar_path(csv), side.dump(2) + "\n");
}

PulseSchedule read_pulse(const fs::path &csv, PulseMetadata *meta) {
    const std::string text = read_text(csv);
    json side;
    try {
        side = json::parse(read_text(sidecar_path(csv)));
    } catch (const json::exception &e) {
        throw IntegrityError("pulse sidecar is not valid JSON: " + std::string(e.what()));
    }
    if (side.value("format", "") != "lieopt-pulse") throw IntegrityError("not a lieopt pulse sidecar");
    if (side.value("csv_sha256", "") != sha256_hex(text)) throw IntegrityError("pulse CSV digest does not match its sidecar");
    PulseMetadata m;
    std::size_t bins = 0;
    double dt = 0.0;
    try {
        m.num_qubits = side.at("n").get<std::size_t>();
        m.model = side.at("model").get<std::string>();
        m.generators = side.at("generators").get<std::vector<std::string>>();
        m.drift_columns = side.at("drift_columns").get<std::vector<std::size_t>>();
        m.generator_hash = side.at("generator_hash").get<std::string>();
        m.basis_hash = side.at("basis_hash").get<std::string>();
        m.config_hash = side.at("config_hash").get<std::string>();
        m.stage = side.at("stage").get<std::string>();
        m.value = side.at("value").get<double>();
        bins = side.at("bins").get<std::size_t>();
        dt = side.at("dt").get<double>();
    } catch (const json::exception &e) {
        throw IntegrityError("pulse sidecar field error: " + std::string(e.what()));
    }
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    const std::size_t ng = m.generators.size();
    Eigen::MatrixXd amps(static_cast<Eigen::Index>(bins), static_cast<Eigen::Index>(ng));
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != ng + 3 || row >= bins) throw IntegrityError("pulse CSV row " + std::to_string(row) + " is malformed");
        if (parse_count(cells[0], "bin index") != row) throw IntegrityError("pulse CSV bins out of order");
        for (std::size_t k = 0; k < ng; ++k) amps(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) = parse_number(cells[k + 3], "amplitude");
        ++row;
    }
    if (row != bins) throw IntegrityError("pulse CSV has " + std::to_string(row) + " bins, sidecar declares " + std::to_string(bins));
    if (meta) *meta = m;
    return PulseSchedule(dt, std::move(amps));
}

void write_plot_csv(const fs::path &path, const PulseSchedule &schedule, const std::vector<std::string> &labels,
                    const std::vector<std::size_t> &drift_columns) {
    std::vector<std::size_t> cols;
    for (std::size_t k = 0; k < schedule.num_generators(); ++k) {
        if (std::find(drift_columns.begin(), drift_columns.end(), k) == drift_columns.end()) cols.push_back(k);
    }
    std::ostringstream out;
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << "t_" << labels.at(cols[c]) << ',' << labels.at(cols[c]);
    out << '\n';
    for (std::size_t l = 0; l < schedule.bins(); ++l) {
        for (int corner = 0; corner < 2; ++corner) {
            const double t = schedule.dt * static_cast<double>(l + static_cast<std::size_t>(corner));
            for (std::size_t c = 0; c < cols.size(); ++c) {
                out << (c ? "," : "") << format_double(t) << ','
                    << format_double(schedule.amplitudes(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(cols[c])));
            }
            out << '\n';
        }
    }
    write_text(path, out.str());
}

void write_coefficients(const fs::path &path, const Eigen::VectorXd &values, const OperatorBasis &basis,
                        const std::string &metadata_json) {
    if (static_cast<std::size_t>(values.size()) != basis.size()) throw DimensionError("coefficient vector length mismatch");
    std::vector<double> v(values.data(), values.data() + values.size());
    json values_json = v;
    json doc = {
        {"format", "lieopt-coefficients"},
        {"version", 1},
        {"n", basis.num_qubits()},
        {"d", basis.size()},
        {"basis_hash", basis.content_hash()},
        {"metadata", json::parse(metadata_json)},
        {"values", values_json},
        {"values_sha256", sha256_hex(values_json.dump())},
    };
    write_text(path, doc.dump(2) + "\n");
}

Eigen::VectorXd read_coefficients(const fs::path &path, const OperatorBasis &basis) {
    json doc;
    try {
        doc = json::parse(read_text(path));
    } catch (const json::exception &e) {
        throw IntegrityError("coefficient file is not valid JSON: " + std::string(e.what()));
    }
    if (doc.value("format", "") != "lieopt-coefficients") throw IntegrityError("not a lieopt coefficient file");
    if (doc.value("basis_hash", "") != basis.content_hash()) throw IntegrityError("coefficient file belongs to another basis");
    const json &values = doc.at("values");
    if (doc.value("values_sha256", "") != sha256_hex(values.dump())) throw IntegrityError("coefficient digest mismatch");
    auto v = values.get<std::vector<double>>();
    if (v.size() != basis.size()) throw IntegrityError("coefficient file has the wrong length");
    return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string trace_line(const TraceRecord &r) {
    json j = {{"eval", r.eval},       {"J", r.value},    {"grad_norm", r.grad_norm}, {"best", r.best},
              {"stage", to_string(r.stage)}, {"restart", r.restart}, {"wall_time", r.wall_time}};
    return j.dump();
}

}  // namespace lieopt
