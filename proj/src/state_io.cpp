// Copyright 2026 The dpskit Authors
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

#include "dpskit/state_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dpskit/error.hpp"

namespace dpskit::io {

namespace {

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error &e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

int read_dim(const Json &j, const char *key) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
        throw FormatError(std::string("missing integer \"") + key + "\"");
    }
    int d = j[key].get<int>();
    if (d < 1) {
        throw FormatError(std::string("\"") + key + "\" must be >= 1");
    }
    return d;
}

Matrix read_matrix(const Json &j, int dim, const std::string &where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim) {
        throw FormatError(where + ": expected " + std::to_string(dim) + " rows");
    }
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const Json &row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != dim) {
            throw FormatError(where + ": row " + std::to_string(r) + " must have " + std::to_string(dim) + " entries");
        }
        for (int c = 0; c < dim; ++c) {
            const Json &e = row[c];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw FormatError(where + ": entry (" + std::to_string(r) + "," + std::to_string(c) +
                                  ") must be a [re, im] pair");
            }
            m(r, c) = cdouble(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

void dump_into(const Json &j, std::string &out, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += pad;
                out += Json(it.key()).dump();
                out += ": ";
                dump_into(it.value(), out, depth + 1);
            }
            out += "\n" + close + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const auto &e : j) {
                flat = flat && !e.is_structured();
            }
            bool pair_rows = true;
            for (const auto &e : j) {
                pair_rows = pair_rows && e.is_array() && !e.empty() && e[0].is_array() && e[0].size() == 2 &&
                            !e[0][0].is_structured();
            }
            out += "[";
            bool first = true;
            for (const auto &e : j) {
                if (!first) {
                    out += flat ? ", " : ",";
                }
                first = false;
                if (!flat) {
                    out += "\n" + pad;
                }
                if (pair_rows) {
                    // A matrix row of [re, im] pairs on one line.
                    out += "[";
                    for (std::size_t k = 0; k < e.size(); ++k) {
                        if (k) {
                            out += ", ";
                        }
                        out += "[" + format_double(e[k][0].get<double>()) + ", " + format_double(e[k][1].get<double>()) +
                               "]";
                    }
                    out += "]";
                } else {
                    dump_into(e, out, depth + 1);
                }
            }
            if (!flat) {
                out += "\n" + close;
            }
            out += "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

StateFile parse_state(std::string_view text, double tol) {
    Json j = parse_json(text);
    if (!j.is_object()) {
        throw FormatError("state file must be a JSON object");
    }
    const int dim = read_dim(j, "dim");
    std::optional<std::array<int, 2>> dims;
    if (j.contains("dims")) {
        const Json &d = j["dims"];
        if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() || !d[1].is_number_integer()) {
            throw FormatError("\"dims\" must be [dA, dB]");
        }
        dims = std::array<int, 2>{d[0].get<int>(), d[1].get<int>()};
        if ((*dims)[0] < 1 || (*dims)[1] < 1 || (*dims)[0] * (*dims)[1] != dim) {
            throw FormatError("\"dims\" does not factor \"dim\"");
        }
    }
    if (!j.contains("matrix")) {
        throw FormatError("missing \"matrix\"");
    }
    Matrix m = read_matrix(j["matrix"], dim, "matrix");
    try {
        return StateFile{DensityMatrix::from_matrix(m, tol), dims};
    } catch (const Error &e) {
        throw FormatError(std::string("state check failed: ") + e.what());
    }
}

StateFile read_state(const std::string &path, double tol) {
    return parse_state(read_file(path), tol);
}

KrausChannel parse_channel(std::string_view text, double tol) {
    Json j = parse_json(text);
    if (!j.is_object()) {
        throw FormatError("channel file must be a JSON object");
    }
    const int dim = read_dim(j, "dim");
    if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty()) {
        throw FormatError("\"kraus\" must be a non-empty array of matrices");
    }
    std::vector<Matrix> kraus;
    for (std::size_t k = 0; k < j["kraus"].size(); ++k) {
        kraus.push_back(read_matrix(j["kraus"][k], dim, "kraus[" + std::to_string(k) + "]"));
    }
    try {
        return KrausChannel::make(std::move(kraus), tol);
    } catch (const Error &e) {
        throw FormatError(std::string("channel check failed: ") + e.what());
    }
}

KrausChannel read_channel(const std::string &path, double tol) {
    return parse_channel(read_file(path), tol);
}

Json matrix_json(const Matrix &m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json state_json(const Matrix &rho, std::optional<std::array<int, 2>> dims) {
    Json j;
    j["dim"] = rho.rows();
    if (dims) {
        j["dims"] = Json::array({(*dims)[0], (*dims)[1]});
    }
    j["matrix"] = matrix_json(rho);
    return j;
}

Json channel_json(const KrausChannel &ch) {
    Json j;
    j["dim"] = ch.dim();
    j["kraus"] = Json::array();
    for (const auto &k : ch.kraus()) {
        j["kraus"].push_back(matrix_json(k));
    }
    return j;
}

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    if (x == 0) {
        x = 0;  // no "-0"
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string dump(const Json &j) {
    std::string out;
    dump_into(j, out, 0);
    out += "\n";
    return out;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("cannot write " + path);
    }
    out << content;
    if (!out) {
        throw FormatError("write failed for " + path);
    }
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t h) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[17];
    auto res = std::to_chars(buf, buf + 16, x, 16);
    std::string s(buf, res.ptr);
    return std::string(16 - s.size(), '0') + s;
}

}  // namespace dpskit::io
