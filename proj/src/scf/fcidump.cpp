#include "qlrsim/scf/fcidump.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <regex>
#include <sstream>

namespace qlrsim::scf {

namespace {

constexpr double kWriteThreshold = 1e-15;

void write_value(std::ostream& out, double v) {
  out << std::setw(28) << std::scientific << std::setprecision(19) << v;
}

std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

// Parses the &FCI ... namelist body into KEY -> raw value text. A value runs
// up to the next KEY= token.
std::map<std::string, std::string> parse_namelist(const std::string& text) {
  const auto start = upper(text).find("&FCI");
  if (start == std::string::npos) throw FcidumpError("FCIDUMP header must start with &FCI");
  const std::string body = text.substr(start + 4);
  static const std::regex key_re(R"(([A-Za-z_][A-Za-z0-9_]*)\s*=)");
  std::vector<std::smatch> keys;
  for (auto it = std::sregex_iterator(body.begin(), body.end(), key_re); it != std::sregex_iterator(); ++it)
    keys.push_back(*it);
  const auto leading = body.substr(0, keys.empty() ? body.size() : keys.front().position());
  if (leading.find_first_not_of(" \t\r\n,") != std::string::npos)
    throw FcidumpError("malformed FCIDUMP header near '" + leading + "'");
  std::map<std::string, std::string> values;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const std::size_t from = keys[k].position() + keys[k].length();
    const std::size_t to = k + 1 < keys.size() ? static_cast<std::size_t>(keys[k + 1].position()) : body.size();
    std::string value = body.substr(from, to - from);
    const auto first = value.find_first_not_of(" \t\r\n,");
    const auto last = value.find_last_not_of(" \t\r\n,");
    value = first == std::string::npos ? "" : value.substr(first, last - first + 1);
    values[upper(keys[k][1].str())] = value;
  }
  return values;
}

int parse_int(const std::map<std::string, std::string>& kv, const std::string& key, bool required, int fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    if (required) throw FcidumpError("FCIDUMP header lacks " + key);
    return fallback;
  }
  try {
    std::size_t used = 0;
    const int v = std::stoi(it->second, &used);
    return v;
  } catch (const std::exception&) {
    throw FcidumpError("FCIDUMP header value for " + key + " is not an integer: '" + it->second + "'");
  }
}

}  // namespace

void write_fcidump(std::ostream& out, const MOIntegrals& mo) {
  const int n = mo.n_orbitals();
  out << " &FCI NORB=" << n << ",NELEC=" << mo.n_electrons << ",MS2=" << mo.ms2 << ",\n  ORBSYM=";
  for (int i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n &END\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l) continue;
          const double v = mo.eri(i, j, k, l);
          if (std::abs(v) < kWriteThreshold) continue;
          write_value(out, v);
          out << ' ' << i + 1 << ' ' << j + 1 << ' ' << k + 1 << ' ' << l + 1 << '\n';
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      if (std::abs(mo.h(i, j)) < kWriteThreshold) continue;
      write_value(out, mo.h(i, j));
      out << ' ' << i + 1 << ' ' << j + 1 << " 0 0\n";
    }
  write_value(out, mo.e_nuc);
  out << " 0 0 0 0\n";
}

MOIntegrals read_fcidump(std::istream& in) {
  std::string header, line;
  bool closed = false;
  while (std::getline(in, line)) {
    header += line + "\n";
    const std::string u = upper(line);
    const auto first = u.find_first_not_of(" \t\r");
    if (u.find("&END") != std::string::npos || (first != std::string::npos && u.substr(first, 1) == "/")) {
      closed = true;
      break;
    }
  }
  if (!closed) throw FcidumpError("FCIDUMP header not terminated by &END or /");
  auto end = upper(header).rfind("&END");
  if (end != std::string::npos) header = header.substr(0, end);
  else header = header.substr(0, header.rfind('/'));
  const auto kv = parse_namelist(header);
  MOIntegrals mo;
  const int n = parse_int(kv, "NORB", true, 0);
  if (n <= 0) throw FcidumpError("NORB must be positive");
  mo.n_electrons = parse_int(kv, "NELEC", true, 0);
  mo.ms2 = parse_int(kv, "MS2", false, 0);
  mo.h = Eigen::MatrixXd::Zero(n, n);
  mo.eri = integrals::EriTensor(n);
  mo.e_nuc = 0.0;

  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string value_text;
    int i, j, k, l;
    if (!(ls >> value_text >> i >> j >> k >> l))
      throw FcidumpError("malformed FCIDUMP record at data line " + std::to_string(lineno) + ": '" + line + "'");
    std::string extra;
    if (ls >> extra) throw FcidumpError("trailing tokens in FCIDUMP record: '" + line + "'");
    for (auto& ch : value_text)
      if (ch == 'D' || ch == 'd') ch = 'E';
    double v;
    try {
      v = std::stod(value_text);
    } catch (const std::exception&) {
      throw FcidumpError("bad FCIDUMP value '" + value_text + "'");
    }
    for (int idx : {i, j, k, l})
      if (idx < 0 || idx > n)
        throw FcidumpError("FCIDUMP index " + std::to_string(idx) + " outside NORB=" + std::to_string(n));
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      mo.e_nuc = v;
    } else if (k == 0 && l == 0) {
      if (i == 0 || j == 0) throw FcidumpError("malformed one-electron record: '" + line + "'");
      mo.h(i - 1, j - 1) = v;
      mo.h(j - 1, i - 1) = v;
    } else {
      if (i == 0 || j == 0 || k == 0 || l == 0) throw FcidumpError("malformed two-electron record: '" + line + "'");
      mo.eri.set_symmetric(i - 1, j - 1, k - 1, l - 1, v);
    }
  }
  return mo;
}

void write_fcidump_file(const std::string& path, const MOIntegrals& mo) {
  std::ofstream out(path);
  if (!out) throw FcidumpError("cannot open " + path + " for writing");
  write_fcidump(out, mo);
}

MOIntegrals read_fcidump_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FcidumpError("cannot open " + path);
  return read_fcidump(in);
}

void write_property_sidecar(std::ostream& out, const PropertyOperatorSet& props) {
  const int n = props.n_orbitals();
  out << "NORB " << n << '\n';
  out << "ORIGIN";
  for (int k = 0; k < 3; ++k) {
    out << ' ';
    write_value(out, props.gauge_origin[k]);
  }
  out << '\n';
  const char* axes = "XYZ";
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        out << 'D' << axes[k] << ' ';
        write_value(out, props.dipole[k](i, j));
        out << ' ' << i + 1 << ' ' << j + 1 << '\n';
      }
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        out << 'L' << axes[k] << ' ';
        write_value(out, props.angular_momentum[k](i, j));
        out << ' ' << i + 1 << ' ' << j + 1 << '\n';
      }
}

PropertyOperatorSet read_property_sidecar(std::istream& in) {
  PropertyOperatorSet props;
  std::string line, tag;
  int n = -1;
  bool have_origin = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (!(ls >> tag)) continue;
    tag = upper(tag);
    if (tag == "NORB") {
      if (!(ls >> n) || n <= 0) throw FcidumpError("bad NORB line in property sidecar");
      for (int k = 0; k < 3; ++k) {
        props.dipole[k] = Eigen::MatrixXd::Zero(n, n);
        props.angular_momentum[k] = Eigen::MatrixXd::Zero(n, n);
      }
      continue;
    }
    if (n < 0) throw FcidumpError("property sidecar must start with NORB");
    if (tag == "ORIGIN") {
      if (!(ls >> props.gauge_origin[0] >> props.gauge_origin[1] >> props.gauge_origin[2]))
        throw FcidumpError("bad ORIGIN line in property sidecar");
      have_origin = true;
      continue;
    }
    if (tag.size() != 2 || (tag[0] != 'D' && tag[0] != 'L') || tag[1] < 'X' || tag[1] > 'Z')
      throw FcidumpError("unknown property sidecar record '" + tag + "'");
    double v;
    int i, j;
    if (!(ls >> v >> i >> j)) throw FcidumpError("malformed property record: '" + line + "'");
    if (i < 1 || j < 1 || i > n || j > n) throw FcidumpError("property index outside NORB: '" + line + "'");
    const int k = tag[1] - 'X';
    if (tag[0] == 'D') {
      props.dipole[k](i - 1, j - 1) = v;
      props.dipole[k](j - 1, i - 1) = v;
    } else {
      if (i == j) throw FcidumpError("diagonal angular-momentum record: '" + line + "'");
      props.angular_momentum[k](i - 1, j - 1) = v;
      props.angular_momentum[k](j - 1, i - 1) = -v;
    }
  }
  if (n < 0) throw FcidumpError("empty property sidecar");
  if (!have_origin) throw FcidumpError("property sidecar lacks ORIGIN");
  return props;
}

}  // namespace qlrsim::scf
