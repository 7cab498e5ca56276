#pragma once

// Minimal parser for the DOT subset the renderer emits:
//   digraph ID { (ID = ID ; | node [attrs] ; | ID [attrs] ; | ID -> ID [attrs] ;)* }
// where ID is a bare identifier/number or a double-quoted string.

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace etma::test {

struct DotGraph {
  std::string name;
  std::map<std::string, std::map<std::string, std::string>> nodes;
  struct DotEdge {
    std::string from, to;
    std::map<std::string, std::string> attrs;
  };
  std::vector<DotEdge> edges;

  std::size_t leaf_count() const {
    std::size_t leaves = 0;
    for (const auto& [id, attrs] : nodes) {
      bool has_out = false;
      for (const auto& e : edges) has_out = has_out || e.from == id;
      leaves += has_out ? 0 : 1;
    }
    return leaves;
  }
};

class DotParser {
 public:
  explicit DotParser(std::string text) : text_(std::move(text)) {}

  DotGraph parse() {
    DotGraph graph;
    expect_word("digraph");
    graph.name = id();
    expect("{");
    while (peek() != "}") {
      const std::string first = id();
      if (peek() == "=") {
        next();
        id();
      } else if (peek() == "->") {
        next();
        DotGraph::DotEdge edge{first, id(), {}};
        if (peek() == "[") edge.attrs = attrs();
        if (!graph.nodes.count(edge.from) || !graph.nodes.count(edge.to)) {
          throw std::runtime_error("edge references undeclared node");
        }
        graph.edges.push_back(std::move(edge));
      } else {
        auto a = attrs();
        if (first != "node") graph.nodes[first] = std::move(a);
      }
      expect(";");
    }
    expect("}");
    skip_space();
    if (pos_ != text_.size()) throw std::runtime_error("trailing input");
    return graph;
  }

 private:
  std::map<std::string, std::string> attrs() {
    std::map<std::string, std::string> out;
    expect("[");
    while (peek() != "]") {
      const std::string key = id();
      expect("=");
      out[key] = id();
      if (peek() == ",") next();
    }
    expect("]");
    return out;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string peek() {
    const std::size_t saved = pos_;
    std::string token = next();
    pos_ = saved;
    return token;
  }

  std::string next() {
    skip_space();
    if (pos_ >= text_.size()) return "";
    const char c = text_[pos_];
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      pos_ += 2;
      return "->";
    }
    if (std::string("{}[];=,").find(c) != std::string::npos) {
      ++pos_;
      return std::string(1, c);
    }
    if (c == '"') {
      std::string out = "\"";
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) out += text_[pos_++];
        out += text_[pos_++];
      }
      if (pos_ >= text_.size()) throw std::runtime_error("unterminated string");
      ++pos_;
      return out + "\"";
    }
    std::string out;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
            text_[pos_] == '.')) {
      out += text_[pos_++];
    }
    if (out.empty()) throw std::runtime_error(std::string("unexpected character ") + c);
    return out;
  }

  std::string id() {
    std::string token = next();
    if (token.empty() || std::string("{}[];=,->").find(token) != std::string::npos) {
      throw std::runtime_error("expected identifier, got '" + token + "'");
    }
    if (token.front() == '"') return token.substr(1, token.size() - 2);
    return token;
  }

  void expect(const std::string& token) {
    const std::string got = next();
    if (got != token) throw std::runtime_error("expected '" + token + "', got '" + got + "'");
  }

  void expect_word(const std::string& word) { expect(word); }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace etma::test
