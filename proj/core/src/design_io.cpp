#include "qqd/design_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "qqd/error.hpp"

namespace qqd {

namespace {

struct Token {
  std::string text;
  int line;
};

std::vector<Token> tokenize(std::istream& in) {
  std::vector<Token> tokens;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string word;
    while (words >> word) tokens.push_back({word, number});
  }
  return tokens;
}

bool is_integer_token(const std::string& s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

int to_int(const Token& t, const char* what) {
  int value = 0;
  const char* first = t.text.data() + (t.text[0] == '+' ? 1 : 0);
  const char* last = t.text.data() + t.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(std::string("expected integer ") + what + ", got '" + t.text + "'", t.line);
  }
  return value;
}

double to_double(const Token& t) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(t.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.text.size()) throw ParseError("expected a number, got '" + t.text + "'", t.line);
  return value;
}

// Collects one row's entries; integer entries become lattice levels.
struct RowAssembler {
  const DesignSpec& spec;
  Matrix<int> qual;
  Matrix<double> quant;

  explicit RowAssembler(const DesignSpec& s)
      : spec(s),
        qual(static_cast<std::size_t>(s.runs()), static_cast<std::size_t>(s.qualitative())),
        quant(static_cast<std::size_t>(s.runs()), static_cast<std::size_t>(s.quantitative())) {}

  void qualitative(std::size_t i, std::size_t k, int level) { qual(i, k) = level; }

  void quantitative_level(std::size_t i, std::size_t k, int level) {
    const int s = spec.levels(spec.qualitative() + static_cast<int>(k));
    if (level < 0 || level >= s) {
      throw DomainError("quantitative level " + std::to_string(level) + " outside 0.." +
                        std::to_string(s - 1) + " at row " + std::to_string(i + 1) +
                        ", column " + std::to_string(spec.qualitative() + k + 1));
    }
    quant(i, k) = level_to_unit(level, s);
  }

  void quantitative_value(std::size_t i, std::size_t k, double x) { quant(i, k) = x; }

  Design finish() { return Design(spec, std::move(qual), std::move(quant)); }
};

// Exact lattice values are written as their level so files round-trip bitwise.
std::optional<int> exact_level(double x, int s) {
  auto level = unit_to_level(x, s);
  if (level && level_to_unit(*level, s) == x) return level;
  return std::nullopt;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace

Design read_design_text(std::istream& in) {
  const auto tokens = tokenize(in);
  if (tokens.size() < 3) throw ParseError("missing 'n p q' header", tokens.empty() ? 1 : tokens[0].line);
  std::size_t pos = 0;
  const int n = to_int(tokens[pos++], "run count");
  const int p = to_int(tokens[pos++], "qualitative count");
  const int q = to_int(tokens[pos++], "quantitative count");
  if (n < 1 || p < 0 || q < 0 || p + q < 1) {
    throw ParseError("invalid header n=" + std::to_string(n) + " p=" + std::to_string(p) +
                         " q=" + std::to_string(q),
                     tokens[0].line);
  }
  const auto m = static_cast<std::size_t>(p + q);
  if (tokens.size() < pos + m) throw ParseError("missing level counts", tokens.back().line);
  std::vector<int> levels(m);
  for (auto& s : levels) s = to_int(tokens[pos++], "level count");
  const DesignSpec spec(n, p, q, levels);

  const std::size_t expected = pos + static_cast<std::size_t>(n) * m;
  if (tokens.size() != expected) {
    const std::size_t have = tokens.size() - pos;
    throw ParseError("expected " + std::to_string(n) + " rows of " + std::to_string(m) +
                         " entries (" + std::to_string(static_cast<std::size_t>(n) * m) +
                         " values), found " + std::to_string(have),
                     tokens.back().line);
  }
  RowAssembler rows(spec);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      const Token& t = tokens[pos++];
      if (k < static_cast<std::size_t>(p)) {
        rows.qualitative(i, k, to_int(t, "qualitative level"));
      } else if (is_integer_token(t.text)) {
        rows.quantitative_level(i, k - static_cast<std::size_t>(p), to_int(t, "level"));
      } else {
        rows.quantitative_value(i, k - static_cast<std::size_t>(p), to_double(t));
      }
    }
  }
  return rows.finish();
}

Design parse_design_text(const std::string& text) {
  std::istringstream in(text);
  return read_design_text(in);
}

void write_design_text(std::ostream& out, const Design& design) {
  const auto& spec = design.spec();
  out << spec.runs() << ' ' << spec.qualitative() << ' ' << spec.quantitative() << '\n';
  for (int k = 0; k < spec.factors(); ++k) out << (k ? " " : "") << spec.levels(k);
  out << '\n';
  const int p = spec.qualitative();
  for (int i = 0; i < spec.runs(); ++i) {
    for (int k = 0; k < spec.factors(); ++k) {
      if (k) out << ' ';
      if (k < p) {
        out << design.qualitative()(i, k);
      } else {
        const double x = design.quantitative()(i, k - p);
        if (auto level = exact_level(x, spec.levels(k))) {
          out << *level;
        } else {
          out << format_real(x);
        }
      }
    }
    out << '\n';
  }
}

Design design_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int p = j.at("p").get<int>();
    const int q = j.at("q").get<int>();
    const DesignSpec spec(n, p, q, j.at("levels").get<std::vector<int>>());
    const auto& rows_json = j.at("rows");
    if (!rows_json.is_array() || rows_json.size() != static_cast<std::size_t>(n)) {
      throw ParseError("'rows' must hold " + std::to_string(n) + " rows", 0);
    }
    RowAssembler rows(spec);
    for (std::size_t i = 0; i < rows_json.size(); ++i) {
      const auto& row = rows_json[i];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(p + q)) {
        throw ParseError("row " + std::to_string(i + 1) + " must hold " +
                             std::to_string(p + q) + " entries",
                         0);
      }
      for (std::size_t k = 0; k < row.size(); ++k) {
        const auto& v = row[k];
        if (!v.is_number()) {
          throw ParseError("row " + std::to_string(i + 1) + " entry " + std::to_string(k + 1) +
                               " is not a number",
                           0);
        }
        if (k < static_cast<std::size_t>(p)) {
          if (!v.is_number_integer()) {
            throw ParseError("qualitative entry at row " + std::to_string(i + 1) +
                                 " must be an integer",
                             0);
          }
          rows.qualitative(i, k, v.get<int>());
        } else if (v.is_number_integer()) {
          rows.quantitative_level(i, k - static_cast<std::size_t>(p), v.get<int>());
        } else {
          rows.quantitative_value(i, k - static_cast<std::size_t>(p), v.get<double>());
        }
      }
    }
    return rows.finish();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid design JSON: ") + e.what(), 0);
  }
}

nlohmann::json design_to_json(const Design& design) {
  const auto& spec = design.spec();
  nlohmann::json rows = nlohmann::json::array();
  const int p = spec.qualitative();
  for (int i = 0; i < spec.runs(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < spec.factors(); ++k) {
      if (k < p) {
        row.push_back(design.qualitative()(i, k));
      } else {
        const double x = design.quantitative()(i, k - p);
        if (auto level = exact_level(x, spec.levels(k))) {
          row.push_back(*level);
        } else {
          row.push_back(x);
        }
      }
    }
    rows.push_back(std::move(row));
  }
  return {{"n", spec.runs()},
          {"p", spec.qualitative()},
          {"q", spec.quantitative()},
          {"levels", spec.levels()},
          {"rows", std::move(rows)}};
}

Design load_design(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path + ": " + e.what(), 0);
    }
    return design_from_json(j);
  }
  return parse_design_text(text);
}

void save_design(const std::string& path, const Design& design, bool as_json) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  if (as_json) {
    out << design_to_json(design).dump(2) << '\n';
  } else {
    write_design_text(out, design);
  }
}

}  // namespace qqd
