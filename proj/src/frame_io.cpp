#include "uframe/frame_io.hpp"

#include <fstream>
#include <sstream>

#include "uframe/errors.hpp"

namespace uframe {

namespace {

std::string lower_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  return cells;
}

}  // namespace

nlohmann::json frame_to_json(const Frame& f) {
  nlohmann::json vectors = nlohmann::json::array();
  for (int i = 0; i < f.n(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < f.k(); ++j) row.push_back(f.matrix()(j, i));
    vectors.push_back(std::move(row));
  }
  return nlohmann::json{{"n", f.n()}, {"k", f.k()}, {"vectors", std::move(vectors)}};
}

Frame frame_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("k") || !j.contains("vectors"))
    throw FormatError("frame json: need keys n, k, vectors");
  if (!j["n"].is_number_integer() || !j["k"].is_number_integer())
    throw FormatError("frame json: n and k must be integers");
  const int n = j["n"].get<int>();
  const int k = j["k"].get<int>();
  const auto& vectors = j["vectors"];
  if (!vectors.is_array() || static_cast<int>(vectors.size()) != n)
    throw FormatError("frame json: vectors must hold exactly n rows");
  Mat m(k, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = vectors[i];
    if (!row.is_array() || static_cast<int>(row.size()) != k)
      throw FormatError("frame json: row " + std::to_string(i) + " must hold k reals");
    for (int c = 0; c < k; ++c) {
      if (!row[c].is_number())
        throw FormatError("frame json: non-numeric coordinate in row " + std::to_string(i));
      m(c, i) = row[c].get<double>();
    }
  }
  return Frame(std::move(m));
}

std::string frame_to_csv(const Frame& f) {
  std::ostringstream out;
  for (int j = 0; j < f.k(); ++j) out << (j ? "," : "") << "v" << (j + 1);
  out << "\n";
  out.precision(17);
  for (int i = 0; i < f.n(); ++i) {
    for (int j = 0; j < f.k(); ++j) out << (j ? "," : "") << f.matrix()(j, i);
    out << "\n";
  }
  return out.str();
}

Frame frame_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("frame csv: empty input");
  const std::vector<std::string> header = split_csv_line(line);
  const int k = static_cast<int>(header.size());
  for (int j = 0; j < k; ++j)
    if (header[j] != "v" + std::to_string(j + 1))
      throw FormatError("frame csv: header must be v1,...,vk");

  std::vector<Vec> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != k)
      throw FormatError("frame csv: line " + std::to_string(line_no) + " has " +
                        std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(k));
    Vec v(k);
    for (int j = 0; j < k; ++j) {
      try {
        std::size_t used = 0;
        v[j] = std::stod(cells[j], &used);
        if (used != cells[j].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw FormatError("frame csv: bad number '" + cells[j] + "' on line " +
                          std::to_string(line_no));
      }
    }
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw FormatError("frame csv: no data rows");
  return Frame(k, rows);
}

Frame read_frame(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  const std::string ext = lower_ext(path);
  if (ext == "csv") return frame_from_csv(in);
  if (ext == "json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("frame json: " + std::string(e.what()));
    }
    return frame_from_json(j);
  }
  throw FormatError("unsupported frame file extension: " + path);
}

void write_frame(const std::string& path, const Frame& f) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  if (lower_ext(path) == "csv") {
    out << frame_to_csv(f);
  } else {
    out << frame_to_json(f).dump() << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace uframe
