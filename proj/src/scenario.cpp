#include "capfilm/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "capfilm/generators.hpp"

namespace capfilm::io {

namespace {

struct Token {
  std::string text;
  int col = 0;  // 1-based
};

struct Line {
  int number = 0;
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    Line line;
    line.number = number;
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
      if (i >= raw.size()) break;
      const std::size_t start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t') ++i;
      line.tokens.push_back({raw.substr(start, i - start), int(start) + 1});
    }
    if (!line.tokens.empty() && line.tokens.front().text[0] == '#') continue;
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(const std::string& source, int line, int col,
                       const std::string& msg) {
  std::ostringstream out;
  out << source << ":" << line << ":" << col << ": " << msg;
  throw std::runtime_error(out.str());
}

double parse_double(const std::string& source, const Line& line,
                    const Token& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.text.c_str(), &end);
  if (end == tok.text.c_str() || *end != '\0')
    fail(source, line.number, tok.col, "malformed number '" + tok.text + "'");
  return v;
}

long long parse_int(const std::string& source, const Line& line,
                    const Token& tok) {
  char* end = nullptr;
  const long long v = std::strtoll(tok.text.c_str(), &end, 10);
  if (end == tok.text.c_str() || *end != '\0')
    fail(source, line.number, tok.col, "malformed integer '" + tok.text + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& source, const Line& line,
                         const Token& tok) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(tok.text.c_str(), &end, 10);
  if (end == tok.text.c_str() || *end != '\0' || tok.text[0] == '-')
    fail(source, line.number, tok.col,
         "malformed unsigned integer '" + tok.text + "'");
  return v;
}

void expect_count(const std::string& source, const Line& line,
                  std::size_t count, const std::string& usage) {
  if (line.tokens.size() != count)
    fail(source, line.number, line.tokens.front().col, "expected '" + usage + "'");
}

bool is_section(const Line& line) {
  const std::string& t = line.tokens.front().text;
  return line.tokens.size() == 1 && t.size() >= 2 && t.front() == '[' &&
         t.back() == ']';
}

// Shared by the scenario's explicit topology and the film format.
struct FilmLineParser {
  std::string source;
  film::FilmComplex film;

  void handle(const Line& line) {
    const std::string& key = line.tokens.front().text;
    if (key == "vertex") {
      if (line.tokens.size() < 2)
        fail(source, line.number, line.tokens.front().col,
             "expected 'vertex free x y' or 'vertex anchor x y disk'");
      film::FilmVertex v;
      const std::string& kind = line.tokens[1].text;
      if (kind == "free") {
        expect_count(source, line, 4, "vertex free x y");
        v.kind = film::VertexKind::free_junction;
      } else if (kind == "anchor") {
        expect_count(source, line, 5, "vertex anchor x y disk");
        v.kind = film::VertexKind::anchor;
        v.disk = int(parse_int(source, line, line.tokens[4]));
      } else {
        fail(source, line.number, line.tokens[1].col,
             "vertex kind must be free or anchor");
      }
      v.position = {parse_double(source, line, line.tokens[2]),
                    parse_double(source, line, line.tokens[3])};
      film.vertices.push_back(v);
    } else if (key == "edge") {
      if (line.tokens.size() < 8 || (line.tokens.size() - 4) % 2 != 0)
        fail(source, line.number, line.tokens.front().col,
             "expected 'edge v0 v1 mult x0 y0 x1 y1 ...'");
      film::FilmEdge e;
      e.v0 = int(parse_int(source, line, line.tokens[1]));
      e.v1 = int(parse_int(source, line, line.tokens[2]));
      e.multiplicity = int(parse_int(source, line, line.tokens[3]));
      if (e.multiplicity != 1 && e.multiplicity != 2)
        fail(source, line.number, line.tokens[3].col,
             "multiplicity must be 1 or 2");
      for (std::size_t i = 4; i + 1 < line.tokens.size(); i += 2)
        e.chain.push_back({parse_double(source, line, line.tokens[i]),
                           parse_double(source, line, line.tokens[i + 1])});
      film.edges.push_back(std::move(e));
    } else if (key == "region") {
      if (line.tokens.size() < 2)
        fail(source, line.number, line.tokens.front().col,
             "expected 'region e0+ e1- ...'");
      film::LiquidRegion r;
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        const Token& tok = line.tokens[i];
        if (tok.text.size() < 2 ||
            (tok.text.back() != '+' && tok.text.back() != '-'))
          fail(source, line.number, tok.col,
               "region entry must look like 3+ or 7-");
        Token idx{tok.text.substr(0, tok.text.size() - 1), tok.col};
        r.loop.push_back(
            {int(parse_int(source, line, idx)), tok.text.back() == '+'});
      }
      film.regions.push_back(std::move(r));
    } else {
      fail(source, line.number, line.tokens.front().col,
           "unknown key '" + key + "' in film description");
    }
  }
};

}  // namespace

solve::Scenario parse_scenario(const std::string& text,
                               const std::string& source_name,
                               double epsilon_override) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty())
    throw std::runtime_error(source_name + ":1:1: empty scenario");

  {
    const Line& head = lines.front();
    std::string joined;
    for (const Token& t : head.tokens) {
      if (!joined.empty()) joined += ' ';
      joined += t.text;
    }
    if (joined != "capfilm scenario v1")
      fail(source_name, head.number, head.tokens.front().col,
           "unrecognized header, expected 'capfilm scenario v1'");
  }

  solve::Scenario s;
  bool have_epsilon = false;
  int epsilon_line = 0;
  std::string generator;
  int generator_line = 0;
  FilmLineParser explicit_topology{source_name, {}};
  bool have_explicit = false;
  std::vector<int> class_lines;

  std::string section;
  std::vector<std::string> seen_sections;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    if (is_section(line)) {
      const std::string name = line.tokens.front().text;
      if (name != "[wireframe]" && name != "[spanning]" &&
          name != "[epsilon]" && name != "[topology]" && name != "[solver]" &&
          name != "[seed]")
        fail(source_name, line.number, line.tokens.front().col,
             "unknown section '" + name + "'");
      for (const std::string& prev : seen_sections)
        if (prev == name)
          fail(source_name, line.number, line.tokens.front().col,
               "duplicate section '" + name + "'");
      seen_sections.push_back(name);
      section = name;
      continue;
    }
    if (section.empty())
      fail(source_name, line.number, line.tokens.front().col,
           "content before any section");

    const Token& keytok = line.tokens.front();
    const std::string& key = keytok.text;

    if (section == "[wireframe]") {
      if (key != "disk")
        fail(source_name, line.number, keytok.col,
             "unknown key '" + key + "' in [wireframe]");
      expect_count(source_name, line, 4, "disk cx cy r");
      film::Disk d;
      d.center = {parse_double(source_name, line, line.tokens[1]),
                  parse_double(source_name, line, line.tokens[2])};
      d.radius = parse_double(source_name, line, line.tokens[3]);
      if (!(d.radius > 0.0))
        fail(source_name, line.number, line.tokens[3].col,
             "disk radius must be positive");
      s.wire.disks.push_back(d);
    } else if (section == "[spanning]") {
      if (key != "class")
        fail(source_name, line.number, keytok.col,
             "unknown key '" + key + "' in [spanning]");
      if (line.tokens.size() < 2)
        fail(source_name, line.number, keytok.col,
             "expected 'class w0 w1 ...'");
      std::vector<int> cls;
      for (std::size_t i = 1; i < line.tokens.size(); ++i)
        cls.push_back(int(parse_int(source_name, line, line.tokens[i])));
      s.spec.classes.push_back(std::move(cls));
      class_lines.push_back(line.number);
    } else if (section == "[epsilon]") {
      if (key != "value")
        fail(source_name, line.number, keytok.col,
             "unknown key '" + key + "' in [epsilon]");
      expect_count(source_name, line, 2, "value x");
      s.epsilon = parse_double(source_name, line, line.tokens[1]);
      have_epsilon = true;
      epsilon_line = line.number;
    } else if (section == "[seed]") {
      if (key != "value")
        fail(source_name, line.number, keytok.col,
             "unknown key '" + key + "' in [seed]");
      expect_count(source_name, line, 2, "value n");
      s.seed = parse_uint(source_name, line, line.tokens[1]);
    } else if (section == "[topology]") {
      if (key == "generator") {
        expect_count(source_name, line, 2, "generator name");
        generator = line.tokens[1].text;
        generator_line = line.number;
        if (generator != "lens" && generator != "collapsed_y" &&
            generator != "inflated_y")
          fail(source_name, line.number, line.tokens[1].col,
               "unknown generator '" + generator + "'");
      } else if (key == "vertex" || key == "edge" || key == "region") {
        explicit_topology.handle(line);
        have_explicit = true;
      } else {
        fail(source_name, line.number, keytok.col,
             "unknown key '" + key + "' in [topology]");
      }
    } else if (section == "[solver]") {
      expect_count(source_name, line, 2, key + " value");
      const Token& val = line.tokens[1];
      if (key == "step") {
        s.config.step = parse_double(source_name, line, val);
      } else if (key == "max_iterations") {
        s.config.max_iterations = int(parse_int(source_name, line, val));
      } else if (key == "gradient_tolerance") {
        s.config.gradient_tolerance = parse_double(source_name, line, val);
      } else if (key == "volume_tolerance") {
        s.config.volume_tolerance = parse_double(source_name, line, val);
      } else if (key == "collapse_merge_distance") {
        s.config.collapse_merge_distance = parse_double(source_name, line, val);
      } else if (key == "resample_target_edge_length") {
        s.config.resample_target_edge_length =
            parse_double(source_name, line, val);
      } else if (key == "pinned_anchors") {
        if (val.text == "true")
          s.config.pinned_anchors = true;
        else if (val.text == "false")
          s.config.pinned_anchors = false;
        else
          fail(source_name, line.number, val.col, "expected true or false");
      } else {
        fail(source_name, line.number, keytok.col,
             "unknown key '" + key + "' in [solver]");
      }
    }
  }

  if (s.wire.disks.empty())
    throw std::runtime_error(source_name + ": scenario has no [wireframe] disks");
  if (s.spec.classes.empty())
    throw std::runtime_error(source_name + ": scenario has no [spanning] classes");
  for (std::size_t i = 0; i < s.spec.classes.size(); ++i) {
    if (s.spec.classes[i].size() != s.wire.disks.size())
      fail(source_name, class_lines[i], 1,
           "spanning class length does not match the disk count");
  }
  if (!have_epsilon)
    throw std::runtime_error(source_name + ": scenario has no [epsilon] value");
  if (epsilon_override > 0.0) s.epsilon = epsilon_override;
  if (!(s.epsilon > 0.0))
    fail(source_name, epsilon_line, 1, "epsilon must be positive");

  if (!generator.empty() && have_explicit)
    fail(source_name, generator_line, 1,
         "generator and explicit topology cannot mix");
  if (generator.empty() && !have_explicit)
    throw std::runtime_error(source_name + ": scenario has no [topology]");

  if (!generator.empty()) {
    if (generator == "lens")
      s.initial = gen::make_lens(s.wire, s.epsilon);
    else if (generator == "collapsed_y")
      s.initial = gen::make_collapsed_y(s.wire, s.epsilon);
    else
      s.initial = gen::make_inflated_y(s.wire, s.epsilon);
  } else {
    s.initial = std::move(explicit_topology.film);
    s.initial.wire = s.wire;
  }
  return s;
}

solve::Scenario load_scenario(const std::string& path,
                              double epsilon_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path, epsilon_override);
}

std::string film_to_text(const film::FilmComplex& f) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "capfilm film v1\n\n[wireframe]\n";
  for (const film::Disk& d : f.wire.disks)
    out << "disk " << d.center.x << " " << d.center.y << " " << d.radius
        << "\n";
  out << "\n[film]\n";
  for (const film::FilmVertex& v : f.vertices) {
    if (v.kind == film::VertexKind::anchor)
      out << "vertex anchor " << v.position.x << " " << v.position.y << " "
          << v.disk << "\n";
    else
      out << "vertex free " << v.position.x << " " << v.position.y << "\n";
  }
  for (const film::FilmEdge& e : f.edges) {
    out << "edge " << e.v0 << " " << e.v1 << " " << e.multiplicity;
    for (const geom::Point& p : e.chain) out << " " << p.x << " " << p.y;
    out << "\n";
  }
  for (const film::LiquidRegion& r : f.regions) {
    out << "region";
    for (const film::OrientedEdge& oe : r.loop)
      out << " " << oe.edge << (oe.forward ? "+" : "-");
    out << "\n";
  }
  return out.str();
}

film::FilmComplex film_from_text(const std::string& text,
                                 const std::string& source_name) {
  const std::vector<Line> lines = tokenize(text);
  if (lines.empty())
    throw std::runtime_error(source_name + ":1:1: empty film file");
  {
    const Line& head = lines.front();
    std::string joined;
    for (const Token& t : head.tokens) {
      if (!joined.empty()) joined += ' ';
      joined += t.text;
    }
    if (joined != "capfilm film v1")
      fail(source_name, head.number, head.tokens.front().col,
           "unrecognized header, expected 'capfilm film v1'");
  }

  FilmLineParser parser{source_name, {}};
  std::string section;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& line = lines[li];
    if (is_section(line)) {
      const std::string name = line.tokens.front().text;
      if (name != "[wireframe]" && name != "[film]")
        fail(source_name, line.number, line.tokens.front().col,
             "unknown section '" + name + "'");
      section = name;
      continue;
    }
    if (section.empty())
      fail(source_name, line.number, line.tokens.front().col,
           "content before any section");
    if (section == "[wireframe]") {
      const Token& keytok = line.tokens.front();
      if (keytok.text != "disk")
        fail(source_name, line.number, keytok.col,
             "unknown key '" + keytok.text + "' in [wireframe]");
      expect_count(source_name, line, 4, "disk cx cy r");
      film::Disk d;
      d.center = {parse_double(source_name, line, line.tokens[1]),
                  parse_double(source_name, line, line.tokens[2])};
      d.radius = parse_double(source_name, line, line.tokens[3]);
      if (!(d.radius > 0.0))
        fail(source_name, line.number, line.tokens[3].col,
             "disk radius must be positive");
      parser.film.wire.disks.push_back(d);
    } else {
      parser.handle(line);
    }
  }
  return std::move(parser.film);
}

film::FilmComplex load_film(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open film file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return film_from_text(buf.str(), path);
}

void save_film(const film::FilmComplex& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write film file: " + path);
  out << film_to_text(f);
}

}  // namespace capfilm::io
