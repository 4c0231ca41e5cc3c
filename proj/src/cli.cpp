#include "treecode/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "treecode/analysis.hpp"
#include "treecode/codec.hpp"
#include "treecode/counting.hpp"
#include "treecode/newick.hpp"
#include "treecode/routing.hpp"
#include "treecode/tree.hpp"

namespace treecode {

namespace {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { Pc, Td, Te };
enum class Format { Auto, Newick, Parent };

struct Options {
  std::string input;
  std::string output;
  Method method = Method::Te;
  Format from = Format::Auto;
  Format to = Format::Newick;
  std::size_t n = 0;
  std::size_t count = 1;
  std::uint64_t seed = 0;
  std::size_t n_min = 1;
  std::size_t n_max = 1;
  std::size_t samples = 1000;
  unsigned threads = 0;
  bool structure_only = false;
};

struct InputTree {
  Tree tree;
  std::optional<std::vector<Label>> labels;
};

class Streams {
 public:
  Streams(std::istream& in, std::ostream& out) : in_(&in), out_(&out) {}

  std::istream& input(const std::string& path, bool binary = false) {
    if (path.empty() || path == "-") return *in_;
    auto mode = binary ? std::ios::in | std::ios::binary : std::ios::in;
    file_in_ = std::make_unique<std::ifstream>(path, mode);
    if (!*file_in_) throw DataError("cannot open " + path);
    return *file_in_;
  }

  std::ostream& output(const std::string& path, bool binary = false) {
    if (path.empty() || path == "-") return *out_;
    auto mode = binary ? std::ios::out | std::ios::binary : std::ios::out;
    file_out_ = std::make_unique<std::ofstream>(path, mode);
    if (!*file_out_) throw DataError("cannot write " + path);
    return *file_out_;
  }

 private:
  std::istream* in_;
  std::ostream* out_;
  std::unique_ptr<std::ifstream> file_in_;
  std::unique_ptr<std::ofstream> file_out_;
};

std::string slurp(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::vector<InputTree> read_trees(const std::string& text, Format format) {
  if (format == Format::Auto) format = text.find(';') != std::string::npos ? Format::Newick : Format::Parent;
  std::vector<InputTree> trees;
  if (format == Format::Parent) {
    std::istringstream in(text);
    for (const auto& parents : read_parent_arrays(in)) trees.push_back({Tree::canonicalize(parents), std::nullopt});
    return trees;
  }
  std::size_t begin = 0;
  while (begin < text.size() && !blank(std::string_view(text).substr(begin))) {
    std::size_t end = text.find(';', begin);
    end = end == std::string::npos ? text.size() : end + 1;
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    try {
      NewickTree parsed = parse_newick(std::string_view(text).substr(begin, end - begin));
      trees.push_back({std::move(parsed.tree), std::move(parsed.labels)});
    } catch (const NewickError& e) {
      throw DataError("newick at offset " + std::to_string(begin + e.position()) + ": " + e.what());
    }
    begin = end;
  }
  return trees;
}

void write_tree(std::ostream& out, const Tree& tree, Format format, const std::optional<std::vector<Label>>& labels = {}) {
  if (format == Format::Parent) {
    write_parent_array(out, tree.parent_array());
  } else {
    out << emit_newick(tree, labels ? std::span<const Label>(*labels) : std::span<const Label>()) << '\n';
  }
}

BitString encode_with(Method m, const Tree& t) {
  switch (m) {
    case Method::Pc: return encode_pc(t);
    case Method::Td: return encode_td(t);
    case Method::Te: break;
  }
  return encode_tree_explorer(t);
}

Tree decode_with(Method m, const BitString& bits, std::size_t n) {
  switch (m) {
    case Method::Pc: return decode_pc(bits, n);
    case Method::Td: return decode_td(bits, n);
    case Method::Te: break;
  }
  return decode_tree_explorer(bits, n);
}

void cmd_encode(const Options& o, Streams& io) {
  const auto trees = read_trees(slurp(io.input(o.input)), o.from);
  std::ostream& out = io.output(o.output);
  for (const InputTree& t : trees) out << encode_with(o.method, t.tree).to_string() << '\n';
}

void cmd_decode(const Options& o, Streams& io) {
  std::istream& in = io.input(o.input);
  std::ostream& out = io.output(o.output);
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }), line.end());
    try {
      write_tree(out, decode_with(o.method, BitString::from_string(line), o.n), o.to);
    } catch (const std::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void cmd_stats(const Options& o, Streams& io) {
  const auto trees = read_trees(slurp(io.input(o.input)), o.from);
  std::ostream& out = io.output(o.output);
  for (const InputTree& t : trees) {
    const TreeStats s = stats(t.tree);
    const CodeLengths len = code_lengths(s);
    out << "n=" << s.n << " leaves=" << s.leaves << " depth=" << s.depth << " pc_bits=" << len.pc
        << " td_bits=" << len.td << " te_bits=" << len.te
        << " method=" << (select_method(s) == CodingMethod::PitClimbing ? "pc" : "td")
        << " newick_bits=" << newick_bit_length(s) << " adjacency_bits=" << adjacency_list_bits(s.n)
        << " labeled_te_bits=" << labeled_te_bits(t.tree) << '\n';
  }
}

void cmd_sample(const Options& o, Streams& io) {
  const UniformTreeSampler sampler(o.n);
  Rng rng(o.seed);
  std::ostream& out = io.output(o.output);
  for (std::size_t i = 0; i < o.count; ++i) write_tree(out, sampler.sample(o.n, rng), o.to);
}

void cmd_enumerate(const Options& o, Streams& io) {
  std::ostream& out = io.output(o.output);
  for_each_tree(o.n, [&](const Tree& t) {
    write_tree(out, t, o.to);
    return true;
  });
}

void cmd_bench(const Options& o, Streams& io) {
  if (o.n_min > o.n_max) throw UsageError("--n-min: must not exceed --n-max");
  BenchmarkOptions b;
  b.n_min = o.n_min;
  b.n_max = o.n_max;
  b.samples_per_n = o.samples;
  b.master_seed = o.seed;
  b.threads = o.threads;
  const auto rows = run_benchmark(b);
  write_benchmark_csv(io.output(o.output), rows);
}

void cmd_packet_encode(const Options& o, Streams& io) {
  const LabeledTree lt = table_from_paths(read_route_list(io.input(o.input)));
  const auto bytes = encode_packet(lt, !o.structure_only);
  io.output(o.output, true).write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void cmd_packet_decode(const Options& o, Streams& io) {
  const std::string raw = slurp(io.input(o.input, true));
  const std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
  const PacketContents p = decode_packet(bytes);
  std::ostream& out = io.output(o.output);
  if (p.labeled) {
    write_route_list(out, tree_to_table(*p.labeled));
  } else {
    write_tree(out, p.structure, o.to);
  }
}

void cmd_convert(const Options& o, Streams& io) {
  const auto trees = read_trees(slurp(io.input(o.input)), o.from);
  std::ostream& out = io.output(o.output);
  for (const InputTree& t : trees) write_tree(out, t.tree, o.to, o.to == Format::Newick ? t.labels : std::nullopt);
}

const std::map<std::string, Method> kMethods{{"pc", Method::Pc}, {"td", Method::Td}, {"te", Method::Te}};
const std::map<std::string, Format> kInputFormats{{"auto", Format::Auto}, {"newick", Format::Newick}, {"parent", Format::Parent}};
const std::map<std::string, Format> kOutputFormats{{"newick", Format::Newick}, {"parent", Format::Parent}};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Succinct codes for unlabeled rooted trees", "treecode"};
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* c) { c->add_option("-i,--input", o.input, "input file (default stdin)"); };
  auto add_output = [&](CLI::App* c) { c->add_option("-o,--output", o.output, "output file (default stdout)"); };
  auto add_method = [&](CLI::App* c) {
    c->add_option("-m,--method", o.method, "pc, td or te")->transform(CLI::CheckedTransformer(kMethods, CLI::ignore_case));
  };
  auto add_from = [&](CLI::App* c) {
    c->add_option("--from", o.from, "input format: auto, newick or parent")
        ->transform(CLI::CheckedTransformer(kInputFormats, CLI::ignore_case));
  };
  auto add_to = [&](CLI::App* c) {
    c->add_option("--to", o.to, "output format: newick or parent")
        ->transform(CLI::CheckedTransformer(kOutputFormats, CLI::ignore_case));
  };
  const auto node_range = CLI::Range(std::size_t{1}, kMaxNodes);

  auto* encode = app.add_subcommand("encode", "encode trees as codewords");
  add_method(encode);
  add_from(encode);
  add_input(encode);
  add_output(encode);

  auto* decode = app.add_subcommand("decode", "decode one codeword per line");
  add_method(decode);
  decode->add_option("-n,--n", o.n, "node count")->required()->check(node_range);
  add_to(decode);
  add_input(decode);
  add_output(decode);

  auto* stats_cmd = app.add_subcommand("stats", "sizes and code lengths of trees");
  add_from(stats_cmd);
  add_input(stats_cmd);
  add_output(stats_cmd);

  auto* sample = app.add_subcommand("sample", "draw uniform random trees");
  sample->add_option("-n,--n", o.n, "node count")->required()->check(node_range);
  sample->add_option("-c,--count", o.count, "number of trees");
  sample->add_option("-s,--seed", o.seed, "random seed");
  add_to(sample);
  add_output(sample);

  auto* enumerate = app.add_subcommand("enumerate", "list every tree with n nodes");
  enumerate->add_option("-n,--n", o.n, "node count")->required()->check(CLI::Range(std::size_t{1}, kMaxEnumerationNodes));
  add_to(enumerate);
  add_output(enumerate);

  auto* bench = app.add_subcommand("bench", "average code lengths as CSV");
  bench->add_option("--n-min", o.n_min, "smallest node count")->required()->check(CLI::Range(std::size_t{1}, kMaxBenchmarkNodes));
  bench->add_option("--n-max", o.n_max, "largest node count")->required()->check(CLI::Range(std::size_t{1}, kMaxBenchmarkNodes));
  bench->add_option("--samples", o.samples, "samples per node count")->check(CLI::PositiveNumber);
  bench->add_option("-s,--seed", o.seed, "master seed");
  bench->add_option("-t,--threads", o.threads, "worker threads (0 = all cores)");
  add_output(bench);

  auto* penc = app.add_subcommand("packet-encode", "route list to binary packet");
  penc->add_flag("--structure-only", o.structure_only, "omit labels");
  add_input(penc);
  add_output(penc);

  auto* pdec = app.add_subcommand("packet-decode", "binary packet to route list (or tree if unlabeled)");
  add_to(pdec);
  add_input(pdec);
  add_output(pdec);

  auto* convert = app.add_subcommand("convert", "translate between Newick and parent-array text");
  add_from(convert);
  add_to(convert);
  add_input(convert);
  add_output(convert);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Streams io(in, out);
  try {
    if (*encode) cmd_encode(o, io);
    else if (*decode) cmd_decode(o, io);
    else if (*stats_cmd) cmd_stats(o, io);
    else if (*sample) cmd_sample(o, io);
    else if (*enumerate) cmd_enumerate(o, io);
    else if (*bench) cmd_bench(o, io);
    else if (*penc) cmd_packet_encode(o, io);
    else if (*pdec) cmd_packet_decode(o, io);
    else if (*convert) cmd_convert(o, io);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace treecode
