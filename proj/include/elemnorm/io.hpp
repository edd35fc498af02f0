#pragma once

#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "elemnorm/elemop.hpp"

namespace elemnorm::io {

using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input; the message carries the location.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// {"n", "l", "a": [matrix...], "b": [matrix...]}, matrix = n^2 [re, im]
/// pairs in row-major order.
ElementaryOperator operator_from_json(const Json& j);
Json operator_to_json(const ElementaryOperator& t);

/// {"dim", "entries"} for a single square matrix.
Matrix square_from_json(const Json& j);
Json square_to_json(const Matrix& m);

/// {"dim", "vectors": [[[re, im]...]...]}
std::vector<Vector> vectors_from_json(const Json& j);
Json vectors_to_json(const std::vector<Vector>& vs);

Json entries_to_json(const Matrix& m);
Json vector_to_json(const Vector& v);

struct Bounds {
    std::optional<double> haagerup;
    std::optional<double> cb;
};

/// <T(x) eta, xi> for the certificate of `report`.
Complex certificate_value(const ElementaryOperator& t, const Certificate& c);

Json certificate_to_json(const Certificate& c, std::optional<double> recomputed);
Json report_to_json(const NormReport& report, const Bounds& bounds,
                    std::optional<double> recomputed = std::nullopt);

}  // namespace elemnorm::io
