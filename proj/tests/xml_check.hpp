#pragma once

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace testing {

// Minimal XML reader: enough to decide well-formedness of generated SVG and to
// look at elements and attributes. No DTDs, no CDATA, no processing
// instructions other than the XML declaration.
struct XmlElement {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::vector<XmlElement> children;
  std::string text;
};

class XmlReader {
 public:
  explicit XmlReader(std::string_view doc) : s_(doc) {}

  XmlElement parse() {
    if (s_.substr(0, 5) == "<?xml") {
      const auto end = s_.find("?>");
      if (end == std::string_view::npos) fail("unterminated declaration");
      pos_ = end + 2;
    }
    skip_space();
    XmlElement root = element();
    skip_space();
    if (pos_ != s_.size()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("xml: " + what + " at offset " + std::to_string(pos_));
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip_space() {
    while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\n' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':' || c == '.';
  }
  std::string name() {
    const auto start = pos_;
    while (!at_end() && name_char(s_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(s_.substr(start, pos_ - start));
  }
  std::string decoded(std::string_view raw) const {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '<') throw std::runtime_error("xml: raw '<' in character data");
      if (raw[i] != '&') {
        out.push_back(raw[i]);
        continue;
      }
      const auto semi = raw.find(';', i);
      if (semi == std::string_view::npos) throw std::runtime_error("xml: unterminated entity");
      const auto ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "amp") out.push_back('&');
      else if (ent == "lt") out.push_back('<');
      else if (ent == "gt") out.push_back('>');
      else if (ent == "quot") out.push_back('"');
      else if (ent == "apos") out.push_back('\'');
      else if (!ent.empty() && ent[0] == '#') out.push_back('?');
      else throw std::runtime_error("xml: unknown entity &" + std::string(ent) + ";");
      i = semi;
    }
    return out;
  }
  void comment() {
    const auto end = s_.find("-->", pos_);
    if (end == std::string_view::npos) fail("unterminated comment");
    pos_ = end + 3;
  }
  XmlElement element() {
    expect('<');
    XmlElement e;
    e.name = name();
    for (;;) {
      const auto before = pos_;
      skip_space();
      if (peek() == '/' || peek() == '>') break;
      if (pos_ == before) fail("attributes must be separated by white space");
      std::string key = name();
      skip_space();
      expect('=');
      skip_space();
      const char q = peek();
      if (q != '"' && q != '\'') fail("attribute value must be quoted");
      ++pos_;
      const auto end = s_.find(q, pos_);
      if (end == std::string_view::npos) fail("unterminated attribute value");
      if (e.attrs.count(key)) fail("duplicate attribute " + key);
      e.attrs[key] = decoded(s_.substr(pos_, end - pos_));
      pos_ = end + 1;
    }
    if (peek() == '/') {
      ++pos_;
      expect('>');
      return e;
    }
    expect('>');
    for (;;) {
      if (at_end()) fail("unclosed element " + e.name);
      if (s_.substr(pos_, 4) == "<!--") {
        comment();
      } else if (s_.substr(pos_, 2) == "</") {
        pos_ += 2;
        if (name() != e.name) fail("mismatched closing tag for " + e.name);
        skip_space();
        expect('>');
        return e;
      } else if (peek() == '<') {
        e.children.push_back(element());
      } else {
        const auto end = s_.find('<', pos_);
        if (end == std::string_view::npos) fail("unclosed element " + e.name);
        e.text += decoded(s_.substr(pos_, end - pos_));
        pos_ = end;
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline XmlElement parse_xml(std::string_view doc) { return XmlReader(doc).parse(); }

template <typename F>
void visit_elements(const XmlElement& e, F&& f) {
  f(e);
  for (const auto& c : e.children) visit_elements(c, f);
}

inline std::vector<const XmlElement*> elements_with_class(const XmlElement& root, const std::string& name,
                                                          const std::string& cls) {
  std::vector<const XmlElement*> out;
  visit_elements(root, [&](const XmlElement& e) {
    const auto it = e.attrs.find("class");
    if (e.name == name && it != e.attrs.end() && it->second == cls) out.push_back(&e);
  });
  return out;
}

}  // namespace testing
