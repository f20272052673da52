#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "modeldelta/catalog.hpp"
#include "modeldelta/compare.hpp"
#include "modeldelta/error.hpp"
#include "modeldelta/fixtures.hpp"
#include "modeldelta/ingest.hpp"
#include "modeldelta/io.hpp"
#include "modeldelta/query.hpp"
#include "modeldelta/textdiff.hpp"
#include "modeldelta/triples.hpp"

namespace modeldelta::cli {

namespace {

namespace fs = std::filesystem;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation:
    case ErrorKind::integrity: return 1;
    case ErrorKind::parse:
    case ErrorKind::usage: return 2;
    case ErrorKind::io: return 3;
  }
  return 1;
}

/// Re-raises parse errors with the file name in front.
template <typename F>
auto parse_file(const std::string& path, F&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

void emit(std::ostream& out, const std::optional<std::string>& path, const std::string& content) {
  if (path) {
    write_file(*path, content);
  } else {
    out << content;
  }
}

const std::vector<std::string> format_names = {"table", "csv", "json"};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Identity-based comparison and change analysis of structured models", "modeldelta"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "modeldelta 1.0.0");

  std::function<void()> action;

  // ingest
  std::string ingest_in;
  std::optional<std::string> ingest_out;
  IngestOptions ingest_opts;
  bool ingest_report = false;
  std::string ingest_format = "table";
  auto* ingest = app.add_subcommand("ingest", "Convert an XML model to .nt3 statements");
  ingest->add_option("input", ingest_in, "XML model")->required();
  ingest->add_option("-o,--output", ingest_out, ".nt3 output (stdout when omitted)");
  ingest->add_option("--id-attr", ingest_opts.id_attribute, "XML attribute holding entity ids")
      ->capture_default_str();
  ingest->add_option("--ref-attr", ingest_opts.ref_attribute, "XML attribute holding references")
      ->capture_default_str();
  ingest->add_flag("--report", ingest_report, "Print the ingest report");
  ingest->add_option("--format", ingest_format, "Report format")->check(CLI::IsMember({"table", "json"}));
  ingest->callback([&] {
    action = [&] {
      const auto result = parse_file(ingest_in, [&](const std::string& t) { return ingest_xml(t, ingest_opts); });
      const std::string nt3 = serialize_graph(result.graph);
      if (ingest_out) write_file(*ingest_out, nt3);
      if (ingest_report) {
        out << (ingest_format == "json" ? render_report_json(result.report) : render_report_table(result.report));
      } else if (!ingest_out) {
        out << nt3;
      }
    };
  });

  // compare
  std::vector<std::string> compare_inputs;
  std::optional<std::string> compare_out;
  auto* compare = app.add_subcommand("compare", "Merge labeled .nt3 models into one comparison model");
  compare->add_option("-l,--label", compare_inputs, "label=file.nt3, repeatable")->required();
  compare->add_option("-o,--output", compare_out, ".ntc output (stdout when omitted)");
  compare->callback([&] {
    action = [&] {
      std::vector<LabeledGraph> graphs;
      for (const auto& spec : compare_inputs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
          throw UsageError("expected label=file, got '" + spec + "'");
        const std::string label = spec.substr(0, eq);
        const std::string path = spec.substr(eq + 1);
        if (std::any_of(graphs.begin(), graphs.end(), [&](const LabeledGraph& g) { return g.label == label; }))
          throw UsageError("duplicate label '" + label + "'");
        graphs.push_back({label, parse_file(path, [](const std::string& t) { return parse_graph(t); })});
      }
      emit(out, compare_out, serialize_comparison(build_comparison(graphs)));
    };
  });

  // query
  std::string query_model, query_file, query_format = "table";
  auto* query = app.add_subcommand("query", "Evaluate a DeltaQuery file against a comparison model");
  query->add_option("comparison", query_model, ".ntc comparison model")->required();
  query->add_option("query", query_file, ".dq query file")->required();
  query->add_option("--format", query_format, "Output format")->check(CLI::IsMember(format_names));
  query->callback([&] {
    action = [&] {
      const auto q = parse_file(query_file, [](const std::string& t) { return parse_query(t); });
      const auto c = parse_file(query_model, [](const std::string& t) { return parse_comparison(t); });
      out << render(evaluate(c, q), parse_output_format(query_format));
    };
  });

  // analyze
  std::string analyze_model, analyze_format = "table", analyze_engine = "native";
  RoleBinding roles;
  std::optional<int> analyze_row;
  auto* analyze = app.add_subcommand("analyze", "Run the 21-row change catalog over a three-way comparison");
  analyze->add_option("comparison", analyze_model, ".ntc comparison model")->required();
  analyze->add_option("--base", roles.base, "Label of the common ancestor")->required();
  analyze->add_option("--left", roles.left, "Label of the upstream revision")->required();
  analyze->add_option("--right", roles.right, "Label of the derived model")->required();
  analyze->add_option("--row", analyze_row, "Compute one row and list its elements");
  analyze->add_option("--format", analyze_format, "Output format")->check(CLI::IsMember(format_names));
  analyze->add_option("--engine", analyze_engine, "native operations or the shipped queries")
      ->check(CLI::IsMember({"native", "query"}))
      ->capture_default_str();
  analyze->callback([&] {
    action = [&] {
      const auto c = parse_file(analyze_model, [](const std::string& t) { return parse_comparison(t); });
      const auto format = parse_output_format(analyze_format);
      if (analyze_row) {
        if (analyze_engine != "native") throw UsageError("--row lists elements and needs --engine native");
        out << render_catalog_row(run_catalog_row(c, roles, *analyze_row), format);
        return;
      }
      const auto report = analyze_engine == "query" ? run_catalog_queries(c, roles) : run_catalog(c, roles);
      for (const auto& d : report.diagnostics) err << "modeldelta: note: " << d << "\n";
      out << render_catalog(report, format);
    };
  });

  // textdiff
  std::string diff_a, diff_b, diff_mode = "word";
  bool diff_text_args = false;
  auto* textdiff = app.add_subcommand("textdiff", "LCS-based diff of two texts");
  textdiff->add_option("a", diff_a, "Old text file")->required();
  textdiff->add_option("b", diff_b, "New text file")->required();
  textdiff->add_option("--mode", diff_mode, "Token granularity")
      ->check(CLI::IsMember({"line", "word"}))
      ->capture_default_str();
  textdiff->add_flag("--text", diff_text_args, "Treat a and b as the texts themselves");
  textdiff->callback([&] {
    action = [&] {
      const std::string a = diff_text_args ? diff_a : read_file(diff_a);
      const std::string b = diff_text_args ? diff_b : read_file(diff_b);
      if (diff_mode == "word") {
        out << render_word_diff(diff_text(a, b, TokenMode::word)) << "\n";
      } else {
        out << render_unified(diff_text(a, b, TokenMode::line), diff_text_args ? "a" : diff_a,
                              diff_text_args ? "b" : diff_b);
      }
    };
  });

  // export-reified
  std::string reify_in;
  std::optional<std::string> reify_out;
  auto* reify = app.add_subcommand("export-reified", "Write a comparison model as plain reified statements");
  reify->add_option("comparison", reify_in, ".ntc comparison model")->required();
  reify->add_option("-o,--output", reify_out, ".nt3 output (stdout when omitted)");
  reify->callback([&] {
    action = [&] {
      const auto c = parse_file(reify_in, [](const std::string& t) { return parse_comparison(t); });
      emit(out, reify_out, serialize_graph(export_reified(c)));
    };
  });

  // fixture
  std::optional<std::string> fixture_spec;
  std::string fixture_dir;
  bool fixture_xml = false;
  auto* fixture = app.add_subcommand("fixture", "Generate a synthetic three-way fixture with its change ledger");
  fixture->add_option("--spec", fixture_spec, "Fixture spec JSON (full-scale defaults when omitted)");
  fixture->add_option("-o,--output", fixture_dir, "Output directory")->required();
  fixture->add_flag("--xml", fixture_xml, "Also write the three models as XML");
  fixture->callback([&] {
    action = [&] {
      const FixtureSpec spec = fixture_spec ? parse_file(*fixture_spec, [](const std::string& t) {
        return parse_fixture_spec(t);
      })
                                            : FixtureSpec::full_scale();
      const Fixture f = generate_fixture(spec);
      const fs::path dir(fixture_dir);
      write_file(dir / "base.nt3", serialize_graph(f.base));
      write_file(dir / "left.nt3", serialize_graph(f.left));
      write_file(dir / "right.nt3", serialize_graph(f.right));
      write_file(dir / "ledger.json", ledger_json(f.ledger));
      if (fixture_xml) {
        write_file(dir / "base.xml", render_model_xml(f.base));
        write_file(dir / "left.xml", render_model_xml(f.left));
        write_file(dir / "right.xml", render_model_xml(f.right));
      }
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "modeldelta: error: " << e.what() << "\n";
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::RequiredError) && !app.get_subcommands().empty())
      err << "run 'modeldelta " << app.get_subcommands().front()->get_name() << " --help' for usage\n";
    return 2;
  }

  try {
    if (action) action();
    out.flush();
    return 0;
  } catch (const Error& e) {
    err << "modeldelta: error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    err << "modeldelta: error: out of memory\n";
    return 1;
  }
}

}  // namespace modeldelta::cli
