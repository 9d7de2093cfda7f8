#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>

#include "distributions.hpp"
#include "error.hpp"

namespace wrji {

// Grammar (whitespace is ignored everywhere):
//   spec  := name '(' [ arg { ',' arg } ] ')'
//   arg   := key '=' ( number | spec | word )
// Examples: exp(rate=2), weibull(rate=1, shape=2), phr(base=exp(rate=1),gamma=5),
//           piecewise(fixture=ex32_x).

namespace detail {

struct SpecNode
{
  std::string name;
  std::map<std::string, std::variant<double, std::string, std::shared_ptr<SpecNode>>> args;
};

class SpecLexer
{
public:
  explicit SpecLexer(const std::string& s)
  {
    for (char c : s)
      if (!std::isspace(static_cast<unsigned char>(c)))
        text_.push_back(c);
  }

  std::shared_ptr<SpecNode> parse_all()
  {
    auto node = parse_spec();
    if (pos_ != text_.size())
      error("unexpected trailing text");
    return node;
  }

private:
  [[noreturn]] void error(const std::string& what) const
  {
    fail(ErrorCode::parse_error, "distribution spec '" + text_ + "': " + what + " at offset " + std::to_string(pos_));
  }

  std::string word()
  {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (start == pos_)
      error("expected a name");
    return text_.substr(start, pos_ - start);
  }

  void expect(char c)
  {
    if (pos_ >= text_.size() || text_[pos_] != c)
      error(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::shared_ptr<SpecNode> parse_spec()
  {
    auto node = std::make_shared<SpecNode>();
    node->name = word();
    expect('(');
    if (pos_ < text_.size() && text_[pos_] == ')') {
      ++pos_;
      return node;
    }
    for (;;) {
      std::string key = word();
      expect('=');
      if (node->args.count(key))
        error("duplicate key '" + key + "'");
      const char c = pos_ < text_.size() ? text_[pos_] : '\0';
      if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        if (*first == '+')
          ++first;
        double v = 0.0;
        auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc())
          error("bad number");
        pos_ = static_cast<std::size_t>(res.ptr - text_.data());
        node->args[key] = v;
      } else {
        const std::size_t save = pos_;
        std::string w = word();
        if (pos_ < text_.size() && text_[pos_] == '(') {
          pos_ = save;
          node->args[key] = parse_spec();
        } else {
          node->args[key] = w;
        }
      }
      if (pos_ < text_.size() && text_[pos_] == ',') {
        ++pos_;
        continue;
      }
      expect(')');
      return node;
    }
  }

  std::string text_;
  std::size_t pos_ = 0;
};

inline Distribution build(const SpecNode& node)
{
  std::set<std::string> used;
  auto num = [&](const std::string& key) {
    auto it = node.args.find(key);
    if (it == node.args.end())
      fail(ErrorCode::invalid_parameter, node.name + ": missing parameter '" + key + "'");
    if (!std::holds_alternative<double>(it->second))
      fail(ErrorCode::parse_error, node.name + ": parameter '" + key + "' must be a number");
    used.insert(key);
    return std::get<double>(it->second);
  };
  auto finish = [&](Distribution d) {
    for (const auto& [k, v] : node.args)
      if (!used.count(k))
        fail(ErrorCode::parse_error, node.name + ": unknown parameter '" + k + "'");
    return d;
  };
  const std::string& f = node.name;
  if (f == "exp" || f == "exponential")
    return finish(Distribution::exponential(num("rate")));
  if (f == "weibull" || f == "wei")
    return finish(Distribution::weibull(num("rate"), num("shape")));
  if (f == "lindley")
    return finish(Distribution::lindley(num("lambda")));
  if (f == "uniform")
    return finish(Distribution::uniform(num("c"), num("d")));
  if (f == "beta")
    return finish(Distribution::beta(num("alpha"), num("beta")));
  if (f == "power")
    return finish(Distribution::power_unit(num("k")));
  if (f == "loglogistic" || f == "ll")
    return finish(Distribution::log_logistic(num("alpha"), num("lambda")));
  if (f == "apll")
    return finish(Distribution::apll(num("alpha"), num("lambda"), num("a")));
  if (f == "exll")
    return finish(Distribution::exll(num("alpha"), num("lambda"), num("a")));
  if (f == "gee")
    return finish(Distribution::gee(num("lambda"), num("alpha"), num("theta")));
  if (f == "eeg")
    return finish(Distribution::eeg(num("alpha"), num("theta"), num("p")));
  if (f == "gamma")
    return finish(Distribution::gamma(num("shape"), num("rate")));
  if (f == "phr") {
    auto it = node.args.find("base");
    if (it == node.args.end() || !std::holds_alternative<std::shared_ptr<SpecNode>>(it->second))
      fail(ErrorCode::parse_error, "phr: 'base' must be a nested distribution spec");
    used.insert("base");
    Distribution base = build(*std::get<std::shared_ptr<SpecNode>>(it->second));
    return finish(Distribution::phr(base, num("gamma")));
  }
  if (f == "piecewise") {
    auto it = node.args.find("fixture");
    if (it == node.args.end() || !std::holds_alternative<std::string>(it->second))
      fail(ErrorCode::parse_error, "piecewise: expected fixture=ex32_x or fixture=ex32_y");
    used.insert("fixture");
    const auto& name = std::get<std::string>(it->second);
    if (name == "ex32_x")
      return finish(fixtures::piecewise_x());
    if (name == "ex32_y")
      return finish(fixtures::piecewise_y());
    fail(ErrorCode::invalid_parameter, "piecewise: unknown fixture '" + name + "'");
  }
  fail(ErrorCode::unknown_family, "unknown distribution family '" + f + "'");
}

} // namespace detail

//! Builds a distribution from a `family(key=value,...)` string.
inline Distribution parse_distribution(const std::string& spec)
{
  detail::SpecLexer lex(spec);
  return detail::build(*lex.parse_all());
}

} // namespace wrji
