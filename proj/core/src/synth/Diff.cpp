//===-- Diff.cpp - Unified diffs between pretty-printed programs ----------===//

#include "symdeffix/Synth.h"

#include <sstream>

namespace symdeffix {

namespace {

std::vector<std::string> splitLines(const std::string &s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line))
    out.push_back(line);
  return out;
}

struct Op {
  char tag; // ' ', '-', '+'
  size_t a, b; // line indexes in before/after (valid per tag)
};

std::vector<Op> editScript(const std::vector<std::string> &x,
                           const std::vector<std::string> &y) {
  size_t n = x.size(), m = y.size();
  std::vector<std::vector<uint32_t>> lcs(n + 1, std::vector<uint32_t>(m + 1, 0));
  for (size_t i = n; i-- > 0;)
    for (size_t j = m; j-- > 0;)
      lcs[i][j] = x[i] == y[j] ? lcs[i + 1][j + 1] + 1
                               : std::max(lcs[i + 1][j], lcs[i][j + 1]);
  std::vector<Op> ops;
  size_t i = 0, j = 0;
  while (i < n || j < m) {
    if (i < n && j < m && x[i] == y[j]) {
      ops.push_back({' ', i++, j++});
    } else if (j < m && (i == n || lcs[i][j + 1] > lcs[i + 1][j])) {
      ops.push_back({'+', i, j++});
    } else {
      ops.push_back({'-', i++, j});
    }
  }
  return ops;
}

std::string range(size_t start, size_t count) {
  // Empty ranges name the line before the gap.
  size_t first = count ? start + 1 : start;
  if (count == 1)
    return std::to_string(first);
  return std::to_string(first) + "," + std::to_string(count);
}

} // namespace

std::string unifiedDiff(const std::string &before, const std::string &after,
                        const std::string &path, int context) {
  if (before == after)
    return "";
  auto x = splitLines(before), y = splitLines(after);
  std::vector<Op> ops = editScript(x, y);
  std::ostringstream os;
  os << "--- a/" << path << "\n+++ b/" << path << "\n";
  size_t ctx = size_t(context);
  size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].tag == ' ') {
      ++k;
      continue;
    }
    // Hunk: from `ctx` lines before this change to `ctx` lines after the
    // last change that is within 2*ctx of the previous one.
    size_t begin = k >= ctx ? k - ctx : 0;
    size_t last = k;
    size_t scan = k;
    while (scan < ops.size()) {
      if (ops[scan].tag != ' ') {
        last = scan;
        ++scan;
        continue;
      }
      size_t run = scan;
      while (run < ops.size() && ops[run].tag == ' ')
        ++run;
      if (run == ops.size() || run - scan > 2 * ctx)
        break;
      scan = run;
    }
    size_t end = std::min(ops.size(), last + 1 + ctx);
    size_t aStart = ops[begin].a, bStart = ops[begin].b;
    size_t aCount = 0, bCount = 0;
    for (size_t i = begin; i < end; ++i) {
      aCount += ops[i].tag != '+';
      bCount += ops[i].tag != '-';
    }
    os << "@@ -" << range(aStart, aCount) << " +" << range(bStart, bCount)
       << " @@\n";
    for (size_t i = begin; i < end; ++i) {
      const Op &o = ops[i];
      os << o.tag << (o.tag == '+' ? y[o.b] : x[o.a]) << "\n";
    }
    k = end;
  }
  return os.str();
}

} // namespace symdeffix
