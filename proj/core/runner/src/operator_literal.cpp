#include "frechet/runner/operator_literal.hpp"

#include <cctype>
#include <fstream>
#include <string>
#include <vector>

#include "frechet/error.hpp"
#include "frechet/runner/config.hpp"

namespace frechet::runner {
namespace {

class Parser {
 public:
  Parser(std::string_view text, const GradedSpace& space, const std::filesystem::path& base)
      : text_(text), space_(space), base_(base) {}

  LinearOperator parse() {
    LinearOperator op = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return op;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::kConfig, "operator literal '" + std::string(text_) + "' at offset " +
                                        std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view token() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')') ++pos_;
    std::string_view t = text_.substr(start, pos_ - start);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    if (t.empty()) fail("empty argument");
    return t;
  }

  double number() { return parse_double(token(), "operator literal"); }

  std::vector<LinearOperator> operator_list() {
    std::vector<LinearOperator> ops;
    expect('(');
    ops.push_back(expr());
    while (accept(',')) ops.push_back(expr());
    expect(')');
    return ops;
  }

  LinearOperator expr() {
    const std::string name = identifier();
    if (name == "id") return LinearOperator::identity(space_);
    if (name == "zero") return LinearOperator::zero(space_);
    if (name == "shift") {
      expect('(');
      const long power = parse_int(token(), "shift power");
      double coef = 1.0;
      if (accept(',')) coef = number();
      expect(')');
      if (power < 0) fail("negative shift power");
      return LinearOperator::shift(space_, static_cast<std::size_t>(power), coef);
    }
    if (name == "diag") {
      expect('(');
      std::vector<double> d{number()};
      while (accept(',')) d.push_back(number());
      expect(')');
      if (d.size() != space_.dim()) fail("diag needs " + std::to_string(space_.dim()) + " entries");
      return LinearOperator::diagonal(space_, std::move(d));
    }
    if (name == "dense") {
      expect('(');
      const std::string file(token());
      expect(')');
      std::filesystem::path p(file);
      if (p.is_relative()) p = base_ / p;
      DenseMatrix m = read_matrix_csv(p);
      if (m.rows() != space_.dim() || m.cols() != space_.dim()) fail("matrix in " + p.string() + " has wrong shape");
      return LinearOperator::dense(space_, std::move(m));
    }
    if (name == "scale") {
      expect('(');
      const double c = number();
      expect(',');
      LinearOperator a = expr();
      expect(')');
      return scale(c, a);
    }
    if (name == "sum" || name == "comp") {
      std::vector<LinearOperator> ops = operator_list();
      LinearOperator acc = ops.front();
      for (std::size_t i = 1; i < ops.size(); ++i) acc = name == "sum" ? add(acc, ops[i]) : compose(acc, ops[i]);
      return acc;
    }
    if (name.empty()) fail("expected an operator");
    fail("unknown operator '" + name + "'");
  }

  std::string_view text_;
  const GradedSpace& space_;
  std::filesystem::path base_;
  std::size_t pos_ = 0;
};

}  // namespace

LinearOperator parse_operator(std::string_view text, const GradedSpace& space, const std::filesystem::path& base_dir) {
  return Parser(text, space, base_dir).parse();
}

DenseMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open matrix file " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    rows.push_back(parse_list(line, path.string()));
  }
  if (rows.empty()) throw Error(ErrorKind::kConfig, "empty matrix file " + path.string());
  DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw Error(ErrorKind::kConfig, "ragged matrix file " + path.string());
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace frechet::runner
