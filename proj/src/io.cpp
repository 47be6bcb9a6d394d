#include "unitalcap/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace unitalcap {

namespace {

using nlohmann::json;

// The JSON parser reports byte offsets; turn one into a 1-based line number.
std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of_byte(text, e.byte)) +
                     ": " + e.what());
  }
}

Index get_index(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw ParseError(std::string("missing or non-integer field \"") + key +
                     "\"");
  }
  return j.at(key).get<Index>();
}

Matrix matrix_from_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) {
    throw ParseError(std::string(what) + ": expected a nonempty array of rows");
  }
  const Index n_rows = static_cast<Index>(rows.size());
  Index n_cols = -1;
  Matrix m;
  for (Index r = 0; r < n_rows; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array()) {
      throw ParseError(std::string(what) + ": row " + std::to_string(r) +
                       " is not an array");
    }
    if (n_cols < 0) {
      n_cols = static_cast<Index>(row.size());
      if (n_cols == 0) {
        throw ParseError(std::string(what) + ": empty row");
      }
      m.resize(n_rows, n_cols);
    } else if (static_cast<Index>(row.size()) != n_cols) {
      throw ParseError(std::string(what) + ": ragged rows");
    }
    for (Index c = 0; c < n_cols; ++c) {
      const json& entry = row[static_cast<std::size_t>(c)];
      if (!entry.is_array() || entry.size() != 2 ||
          !entry[0].is_number() || !entry[1].is_number()) {
        throw ParseError(std::string(what) + ": entry (" + std::to_string(r) +
                         ", " + std::to_string(c) +
                         ") is not a [re, im] pair");
      }
      m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << text;
}

}  // namespace

KrausChannel channel_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw ParseError("channel: top level is not an object");
  const Index d_in = get_index(j, "d_in");
  const Index d_out = get_index(j, "d_out");
  if (!j.contains("kraus") || !j.at("kraus").is_array() ||
      j.at("kraus").empty()) {
    throw ParseError("channel: \"kraus\" must be a nonempty array");
  }
  std::vector<Matrix> ops;
  ops.reserve(j.at("kraus").size());
  for (std::size_t i = 0; i < j.at("kraus").size(); ++i) {
    const std::string what = "kraus[" + std::to_string(i) + "]";
    Matrix m = matrix_from_json(j.at("kraus")[i], what.c_str());
    if (m.rows() != d_out || m.cols() != d_in) {
      throw ParseError(what + ": shape " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + " does not match d_out x "
                       "d_in = " + std::to_string(d_out) + "x" +
                       std::to_string(d_in));
    }
    ops.push_back(std::move(m));
  }
  return KrausChannel(std::move(ops));
}

std::string channel_to_json(const KrausChannel& ch) {
  json j;
  j["d_in"] = ch.input_dim();
  j["d_out"] = ch.output_dim();
  json ops = json::array();
  for (const Matrix& e : ch.kraus()) ops.push_back(matrix_to_json(e));
  j["kraus"] = std::move(ops);
  return j.dump(1);
}

KrausChannel load_channel(const std::string& path) {
  return channel_from_json(read_file(path));
}

void save_channel(const std::string& path, const KrausChannel& ch) {
  write_file(path, channel_to_json(ch) + "\n");
}

CodeSpec code_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw ParseError("code: top level is not an object");
  CodeSpec code;
  code.n = static_cast<int>(get_index(j, "n"));
  code.d = get_index(j, "d");
  code.d_T = get_index(j, "d_T");
  code.d_C = get_index(j, "d_C");
  if (!j.contains("encoder")) throw ParseError("code: missing \"encoder\"");
  code.encoder = matrix_from_json(j.at("encoder"), "encoder");
  validate_code(code);
  return code;
}

std::string code_to_json(const CodeSpec& code) {
  json j;
  j["n"] = code.n;
  j["d"] = code.d;
  j["d_T"] = code.d_T;
  j["d_C"] = code.d_C;
  j["encoder"] = matrix_to_json(code.encoder);
  return j.dump(1);
}

CodeSpec load_code(const std::string& path) {
  return code_from_json(read_file(path));
}

void save_code(const std::string& path, const CodeSpec& code) {
  write_file(path, code_to_json(code) + "\n");
}

}  // namespace unitalcap
