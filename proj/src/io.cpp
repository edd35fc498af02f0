#include "elemnorm/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace elemnorm::io {

namespace {

std::string location(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    std::ostringstream os;
    os << "line " << line << ", column " << column;
    return os.str();
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw InputError(path + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    const auto it = j.find(key);
    if (it == j.end()) {
        fail(path, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

Index positive_int(const Json& j, const char* key, const std::string& path) {
    const Json& v = field(j, key, path);
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        fail(path + "." + key, "expected a positive integer");
    }
    return static_cast<Index>(v.get<long long>());
}

Complex complex_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(path, "expected a [re, im] pair of numbers");
    }
    const Complex z(j[0].get<double>(), j[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        fail(path, "non-finite number");
    }
    return z;
}

Matrix matrix_from_entries(const Json& j, Index n, const std::string& path) {
    if (!j.is_array() || static_cast<Index>(j.size()) != n * n) {
        std::ostringstream os;
        os << "expected " << n * n << " [re, im] pairs (row-major " << n << "x" << n << ")";
        if (j.is_array()) {
            os << ", got " << j.size();
        }
        fail(path, os.str());
    }
    Matrix m(n, n);
    for (Index r = 0; r < n; ++r) {
        for (Index c = 0; c < n; ++c) {
            const std::size_t k = static_cast<std::size_t>(r * n + c);
            m(r, c) = complex_from_json(j[k], path + "[" + std::to_string(k) + "]");
        }
    }
    return m;
}

std::vector<Matrix> tuple_from_json(const Json& j, const char* key, Index n, Index l) {
    const Json& arr = field(j, key, "$");
    const std::string path = std::string("$.") + key;
    if (!arr.is_array() || static_cast<Index>(arr.size()) != l) {
        fail(path, "expected an array of l = " + std::to_string(l) + " matrices");
    }
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(matrix_from_entries(arr[i], n, path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::string what = e.what();
        const auto column = what.find(", column ");
        const auto colon = what.find(": ", column == std::string::npos ? 0 : column);
        if (colon != std::string::npos) {
            what = what.substr(colon + 2);
        }
        throw InputError(source + ": malformed JSON at " + location(text, e.byte > 0 ? e.byte - 1 : 0) +
                         " (byte " + std::to_string(e.byte) + "): " + what);
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError(path + ": cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_json(buffer.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError(path + ": cannot write file");
    }
    out << text;
}

ElementaryOperator operator_from_json(const Json& j) {
    const Index n = positive_int(j, "n", "$");
    const Index l = positive_int(j, "l", "$");
    std::vector<Matrix> a = tuple_from_json(j, "a", n, l);
    std::vector<Matrix> b = tuple_from_json(j, "b", n, l);
    return ElementaryOperator(std::move(a), std::move(b));
}

Json entries_to_json(const Matrix& m) {
    Json arr = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            arr.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
    }
    return arr;
}

Json vector_to_json(const Vector& v) {
    Json arr = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        arr.push_back(Json::array({v(i).real(), v(i).imag()}));
    }
    return arr;
}

Json operator_to_json(const ElementaryOperator& t) {
    Json j;
    j["n"] = t.dim();
    j["l"] = t.length();
    j["a"] = Json::array();
    j["b"] = Json::array();
    for (Index k = 0; k < t.length(); ++k) {
        j["a"].push_back(entries_to_json(t.a()[k]));
        j["b"].push_back(entries_to_json(t.b()[k]));
    }
    return j;
}

Matrix square_from_json(const Json& j) {
    const Index dim = positive_int(j, "dim", "$");
    return matrix_from_entries(field(j, "entries", "$"), dim, "$.entries");
}

Json square_to_json(const Matrix& m) {
    Json j;
    j["dim"] = m.rows();
    j["entries"] = entries_to_json(m);
    return j;
}

std::vector<Vector> vectors_from_json(const Json& j) {
    const Index dim = positive_int(j, "dim", "$");
    const Json& arr = field(j, "vectors", "$");
    if (!arr.is_array() || arr.empty()) {
        fail("$.vectors", "expected a non-empty array of vectors");
    }
    std::vector<Vector> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "$.vectors[" + std::to_string(i) + "]";
        if (!arr[i].is_array() || static_cast<Index>(arr[i].size()) != dim) {
            fail(path, "expected " + std::to_string(dim) + " [re, im] pairs");
        }
        Vector v(dim);
        for (Index k = 0; k < dim; ++k) {
            v(k) = complex_from_json(arr[i][static_cast<std::size_t>(k)],
                                     path + "[" + std::to_string(k) + "]");
        }
        out.push_back(std::move(v));
    }
    return out;
}

Json vectors_to_json(const std::vector<Vector>& vs) {
    Json j;
    j["dim"] = vs.empty() ? 0 : vs.front().size();
    j["vectors"] = Json::array();
    for (const Vector& v : vs) {
        j["vectors"].push_back(vector_to_json(v));
    }
    return j;
}

Complex certificate_value(const ElementaryOperator& t, const Certificate& c) {
    const Index n = c.xi.size();
    if (n == t.dim()) {
        return c.xi.dot(elemnorm::apply(t, c.x) * c.eta);
    }
    const Index k = n / t.dim();
    return c.xi.dot(elemnorm::apply(amplify(t, k), c.x) * c.eta);
}

Json certificate_to_json(const Certificate& c, std::optional<double> recomputed) {
    Json j;
    j["xi"] = vector_to_json(c.xi);
    j["eta"] = vector_to_json(c.eta);
    j["x"] = square_to_json(c.x);
    j["x_norm"] = spectral_norm(c.x);
    if (recomputed) {
        j["recomputed"] = *recomputed;
    }
    return j;
}

Json report_to_json(const NormReport& report, const Bounds& bounds,
                    std::optional<double> recomputed) {
    Json j;
    j["value"] = report.value;
    j["method"] = to_string(report.method);
    j["certificate"] = report.certificate ? certificate_to_json(*report.certificate, recomputed)
                                          : Json(nullptr);
    j["restarts_used"] = report.restarts_used;
    j["converged"] = report.converged;
    j["seed"] = report.seed;
    Json b;
    b["haagerup"] = bounds.haagerup ? Json(*bounds.haagerup) : Json(nullptr);
    b["cb"] = bounds.cb ? Json(*bounds.cb) : Json(nullptr);
    j["bounds"] = b;
    return j;
}

}  // namespace elemnorm::io
