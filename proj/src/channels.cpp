// Copyright 2026 The niqzk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "niqzk/channels.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "niqzk/kernels.hpp"

namespace niqzk {

namespace {

void validate_qubit_list(const std::vector<int>& qubits, int width,
                         const char* what) {
  if (qubits.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty qubit list");
  }
  std::vector<bool> seen(width, false);
  for (int q : qubits) {
    if (q < 0 || q >= width) {
      throw std::invalid_argument(std::string(what) + ": qubit " +
                                  std::to_string(q) + " out of range");
    }
    if (seen[q]) {
      throw std::invalid_argument(std::string(what) + ": duplicate qubit " +
                                  std::to_string(q));
    }
    seen[q] = true;
  }
}

void validate_steps(const std::vector<ChannelStep>& steps, int width,
                    int num_out) {
  if (steps.empty()) {
    throw std::invalid_argument("channel path does not terminate");
  }
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const bool last = (i + 1 == steps.size());
    const auto& s = steps[i].v;
    if (const auto* p = std::get_if<PrepareStep>(&s)) {
      if (p->state.num_qubits() != width) {
        throw std::invalid_argument("PREPARE width differs from channel width");
      }
      if (last) throw std::invalid_argument("channel path does not terminate");
    } else if (const auto* u = std::get_if<UnitaryStep>(&s)) {
      if (u->circuit.num_qubits() != width) {
        throw std::invalid_argument("UNITARY width differs from channel width");
      }
      if (u->circuit.has_stateprep()) {
        throw std::invalid_argument("UNITARY steps must be gate-only");
      }
      if (last) throw std::invalid_argument("channel path does not terminate");
    } else if (const auto* m = std::get_if<MeasureBranchStep>(&s)) {
      if (!last) {
        throw std::invalid_argument("BRANCH must end its step list");
      }
      validate_qubit_list(m->qubits, width, "BRANCH");
      validate_steps(m->all_zero, width, num_out);
      validate_steps(m->otherwise, width, num_out);
    } else if (const auto* c = std::get_if<CoinStep>(&s)) {
      if (!last) throw std::invalid_argument("COIN must end its step list");
      if (!(c->probability_heads >= 0.0 && c->probability_heads <= 1.0)) {
        throw std::invalid_argument("COIN probability must be in [0, 1]");
      }
      validate_steps(c->heads, width, num_out);
      validate_steps(c->tails, width, num_out);
    } else if (const auto* po = std::get_if<PrepareOutputStep>(&s)) {
      if (!last) {
        throw std::invalid_argument("steps after a PREPOUT terminator");
      }
      if (po->state.num_qubits() != num_out) {
        throw std::invalid_argument("PREPOUT width differs from output width");
      }
    } else if (const auto* oq = std::get_if<OutputQubitsStep>(&s)) {
      if (!last) {
        throw std::invalid_argument("steps after an OUTPUT terminator");
      }
      validate_qubit_list(oq->keep, width, "OUTPUT");
      if (static_cast<int>(oq->keep.size()) != num_out) {
        throw std::invalid_argument("OUTPUT qubit count differs from width");
      }
    }
  }
}

// Evaluates a step list on a subnormalized working state; the result is the
// subnormalized output, so branch weights fold in for free.
Mat eval_steps(const std::vector<ChannelStep>& steps, Mat state, int width,
               int num_out) {
  const auto out_dim = static_cast<Eigen::Index>(dim_of(num_out));
  for (const auto& step : steps) {
    if (const auto* p = std::get_if<PrepareStep>(&step.v)) {
      state = state.trace().real() * p->state.matrix();
    } else if (const auto* u = std::get_if<UnitaryStep>(&step.v)) {
      apply_circuit_density(state, width, u->circuit);
    } else if (const auto* m = std::get_if<MeasureBranchStep>(&step.v)) {
      kernels::dephase(state, width, m->qubits);
      std::uint64_t mask = 0;
      for (int q : m->qubits) {
        mask |= std::uint64_t{1} << bit_position(width, q);
      }
      Mat zero_sector = state;
      const auto d = static_cast<std::uint64_t>(state.rows());
      for (std::uint64_t c = 0; c < d; ++c) {
        for (std::uint64_t r = 0; r < d; ++r) {
          if ((r & mask) || (c & mask)) {
            zero_sector(static_cast<Eigen::Index>(r),
                        static_cast<Eigen::Index>(c)) = 0;
          }
        }
      }
      Mat rest = state - zero_sector;
      return eval_steps(m->all_zero, std::move(zero_sector), width, num_out) +
             eval_steps(m->otherwise, std::move(rest), width, num_out);
    } else if (const auto* c = std::get_if<CoinStep>(&step.v)) {
      const double p_heads = c->probability_heads;
      Mat heads_in = p_heads * state;
      Mat tails_in = (1.0 - p_heads) * state;
      return eval_steps(c->heads, std::move(heads_in), width, num_out) +
             eval_steps(c->tails, std::move(tails_in), width, num_out);
    } else if (const auto* po = std::get_if<PrepareOutputStep>(&step.v)) {
      return state.trace().real() * po->state.matrix();
    } else if (const auto* oq = std::get_if<OutputQubitsStep>(&step.v)) {
      std::vector<int> keep = oq->keep;
      std::sort(keep.begin(), keep.end());
      return kernels::partial_trace(state, width, keep);
    }
  }
  // Unreachable for validated channels.
  return Mat::Zero(out_dim, out_dim);
}

}  // namespace

ChannelDescription::ChannelDescription(int num_qubits, int num_output_qubits,
                                       std::vector<ChannelStep> steps)
    : num_qubits_(num_qubits),
      num_output_qubits_(num_output_qubits),
      steps_(std::move(steps)) {
  if (num_qubits_ < 0 || num_output_qubits_ < 0) {
    throw std::invalid_argument("channel widths must be non-negative");
  }
  validate_steps(steps_, num_qubits_, num_output_qubits_);
}

DensityOperator channel_output(const ChannelDescription& ch) {
  limits::require_density(ch.num_qubits(), "channel_output");
  const auto d = static_cast<Eigen::Index>(dim_of(ch.num_qubits()));
  Mat start = Mat::Zero(d, d);
  start(0, 0) = 1.0;
  Mat out = eval_steps(ch.steps(), std::move(start), ch.num_qubits(),
                       ch.num_output_qubits());
  out = (out + out.adjoint().eval()) / 2.0;
  return DensityOperator(ch.num_output_qubits(), std::move(out));
}

namespace {

struct Cursor {
  std::vector<std::pair<int, std::vector<std::string>>> lines;  // (line#, tokens)
  std::size_t at = 0;
  std::string source;

  bool done() const { return at >= lines.size(); }
  const std::vector<std::string>& peek() const { return lines[at].second; }
  int line() const {
    return done() ? (lines.empty() ? 0 : lines.back().first) : lines[at].first;
  }
  const std::vector<std::string>& take() { return lines[at++].second; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(source, line(), msg);
  }
};

Cursor make_cursor(std::string_view text, std::string_view source) {
  Cursor cur;
  cur.source = std::string(source);
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    std::vector<std::string> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      if (j > i) toks.emplace_back(line.substr(i, j - i));
      i = j;
    }
    if (!toks.empty()) cur.lines.emplace_back(line_no, std::move(toks));
  }
  return cur;
}

int to_int(const std::string& tok, const Cursor& cur) {
  int v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    cur.fail("expected an integer, got '" + tok + "'");
  }
  return v;
}

double to_double(const std::string& tok, const Cursor& cur) {
  double v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    cur.fail("expected a number, got '" + tok + "'");
  }
  return v;
}

cplx to_amp(const std::string& tok, const Cursor& cur) {
  const auto comma = tok.find(',');
  if (comma == std::string::npos) cur.fail("expected 're,im', got '" + tok + "'");
  return {to_double(tok.substr(0, comma), cur),
          to_double(tok.substr(comma + 1), cur)};
}

DensityOperator read_matrix(Cursor& cur, int num_qubits) {
  const auto d = static_cast<Eigen::Index>(dim_of(num_qubits));
  Mat m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    if (cur.done()) cur.fail("unexpected end of matrix block");
    const auto& toks = cur.take();
    if (static_cast<Eigen::Index>(toks.size()) != d) {
      cur.fail("matrix row needs " + std::to_string(d) + " entries");
    }
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = to_amp(toks[c], cur);
  }
  try {
    return DensityOperator(num_qubits, std::move(m));
  } catch (const std::invalid_argument& e) {
    cur.fail(e.what());
  }
}

std::vector<ChannelStep> parse_steps(Cursor& cur, int width, int out_width,
                                     bool in_block);

std::vector<ChannelStep> parse_block(Cursor& cur, int width, int out_width) {
  if (cur.done() || cur.peek() != std::vector<std::string>{"{"}) {
    cur.fail("expected '{'");
  }
  cur.take();
  auto steps = parse_steps(cur, width, out_width, true);
  if (cur.done() || cur.peek() != std::vector<std::string>{"}"}) {
    cur.fail("expected '}'");
  }
  cur.take();
  return steps;
}

std::vector<ChannelStep> parse_steps(Cursor& cur, int width, int out_width,
                                     bool in_block) {
  std::vector<ChannelStep> steps;
  while (!cur.done()) {
    const auto& toks = cur.peek();
    if (toks[0] == "}") {
      if (!in_block) cur.fail("unmatched '}'");
      return steps;
    }
    if (toks[0] == "PREPARE") {
      cur.take();
      steps.push_back({PrepareStep{read_matrix(cur, width)}});
    } else if (toks[0] == "UNITARY") {
      if (toks.size() != 2) cur.fail("expected 'UNITARY <gate-count>'");
      const int count = to_int(toks[1], cur);
      cur.take();
      std::string text =
          "qubits " + std::to_string(width) + "\nout 0\n";
      for (int i = 0; i < count; ++i) {
        if (cur.done()) cur.fail("unexpected end of UNITARY block");
        std::string joined;
        for (const auto& t : cur.take()) {
          if (!joined.empty()) joined += ' ';
          joined += t;
        }
        text += joined + "\n";
      }
      try {
        steps.push_back({UnitaryStep{parse_circuit(text, cur.source)}});
      } catch (const ParseError& e) {
        cur.fail(std::string("in UNITARY block: ") + e.what());
      }
    } else if (toks[0] == "BRANCH") {
      MeasureBranchStep mb;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        mb.qubits.push_back(to_int(toks[i], cur));
      }
      cur.take();
      mb.all_zero = parse_block(cur, width, out_width);
      if (cur.done() || cur.peek() != std::vector<std::string>{"ELSE"}) {
        cur.fail("expected 'ELSE'");
      }
      cur.take();
      mb.otherwise = parse_block(cur, width, out_width);
      steps.push_back({std::move(mb)});
    } else if (toks[0] == "COIN") {
      if (toks.size() != 2) cur.fail("expected 'COIN <p>'");
      CoinStep coin;
      coin.probability_heads = to_double(toks[1], cur);
      cur.take();
      coin.heads = parse_block(cur, width, out_width);
      if (cur.done() || cur.peek() != std::vector<std::string>{"ELSE"}) {
        cur.fail("expected 'ELSE'");
      }
      cur.take();
      coin.tails = parse_block(cur, width, out_width);
      steps.push_back({std::move(coin)});
    } else if (toks[0] == "OUTPUT") {
      OutputQubitsStep oq;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        oq.keep.push_back(to_int(toks[i], cur));
      }
      cur.take();
      steps.push_back({std::move(oq)});
    } else if (toks[0] == "PREPOUT") {
      cur.take();
      steps.push_back({PrepareOutputStep{read_matrix(cur, out_width)}});
    } else {
      cur.fail("unknown channel step '" + toks[0] + "'");
    }
  }
  if (in_block) cur.fail("unexpected end of block");
  return steps;
}

void serialize_steps(const std::vector<ChannelStep>& steps, int depth,
                     std::string& out) {
  const std::string pad(2 * depth, ' ');
  auto matrix_rows = [&](const Mat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      out += pad;
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out += ' ';
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12f,%.12f", m(r, c).real(),
                      m(r, c).imag());
        out += buf;
      }
      out += '\n';
    }
  };
  for (const auto& step : steps) {
    if (const auto* p = std::get_if<PrepareStep>(&step.v)) {
      out += pad + "PREPARE\n";
      matrix_rows(p->state.matrix());
    } else if (const auto* u = std::get_if<UnitaryStep>(&step.v)) {
      out += pad + "UNITARY " + std::to_string(u->circuit.gates().size()) +
             "\n";
      const std::string body = serialize_circuit(u->circuit);
      // Skip the two header lines of the embedded circuit.
      std::size_t pos = body.find('\n');
      pos = body.find('\n', pos + 1) + 1;
      std::size_t start = pos;
      while (start < body.size()) {
        const auto eol = body.find('\n', start);
        out += pad + body.substr(start, eol - start) + "\n";
        start = eol + 1;
      }
    } else if (const auto* m = std::get_if<MeasureBranchStep>(&step.v)) {
      out += pad + "BRANCH";
      for (int q : m->qubits) out += " " + std::to_string(q);
      out += "\n" + pad + "{\n";
      serialize_steps(m->all_zero, depth + 1, out);
      out += pad + "}\n" + pad + "ELSE\n" + pad + "{\n";
      serialize_steps(m->otherwise, depth + 1, out);
      out += pad + "}\n";
    } else if (const auto* c = std::get_if<CoinStep>(&step.v)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12f", c->probability_heads);
      out += pad + "COIN " + buf + "\n" + pad + "{\n";
      serialize_steps(c->heads, depth + 1, out);
      out += pad + "}\n" + pad + "ELSE\n" + pad + "{\n";
      serialize_steps(c->tails, depth + 1, out);
      out += pad + "}\n";
    } else if (const auto* po = std::get_if<PrepareOutputStep>(&step.v)) {
      out += pad + "PREPOUT\n";
      matrix_rows(po->state.matrix());
    } else if (const auto* oq = std::get_if<OutputQubitsStep>(&step.v)) {
      out += pad + "OUTPUT";
      for (int q : oq->keep) out += " " + std::to_string(q);
      out += "\n";
    }
  }
}

}  // namespace

ChannelDescription parse_channel(std::string_view text,
                                 std::string_view source_name) {
  Cursor cur = make_cursor(text, source_name);
  if (cur.done() || cur.peek().size() != 2 || cur.peek()[0] != "channel") {
    cur.fail("expected 'channel <width>'");
  }
  const int width = to_int(cur.peek()[1], cur);
  cur.take();
  if (cur.done() || cur.peek().size() != 2 || cur.peek()[0] != "out") {
    cur.fail("expected 'out <width>'");
  }
  const int out_width = to_int(cur.peek()[1], cur);
  cur.take();
  auto steps = parse_steps(cur, width, out_width, false);
  try {
    return ChannelDescription(width, out_width, std::move(steps));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(source_name), cur.line(), e.what());
  }
}

ChannelDescription load_channel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open channel file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel(buf.str(), path);
}

std::string serialize_channel(const ChannelDescription& ch) {
  std::string out = "channel " + std::to_string(ch.num_qubits()) + "\nout " +
                    std::to_string(ch.num_output_qubits()) + "\n";
  serialize_steps(ch.steps(), 0, out);
  return out;
}

void save_channel(const ChannelDescription& ch, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write channel file: " + path);
  out << serialize_channel(ch);
}

}  // namespace niqzk
