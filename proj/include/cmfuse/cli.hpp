#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmfuse/error.hpp"
#include "cmfuse/integrate.hpp"
#include "cmfuse/model.hpp"
#include "cmfuse/ontology.hpp"
#include "cmfuse/report.hpp"
#include "cmfuse/simatch.hpp"
#include "cmfuse/transform.hpp"

namespace cmfuse::cli {

// Exit-code contract.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kInvalid = 2;
inline constexpr int kConflict = 3;

enum class Format { text, json };

struct RunConfig {
  SimOptions sim;
  bool fail_on_conflict = false;
  Format format = Format::text;
};

namespace detail {

// Thrown to unwind to run() with an exit status; the message is already out.
struct Exit {
  int code;
};

class Session {
 public:
  Session(std::ostream& out, std::ostream& err) : out_(out), err_(err) {
    const char* env = std::getenv("CMFUSE_COLOR");
    style_.color = env != nullptr && std::string_view(env) == "1";
  }

  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }
  const Style& style() const { return style_; }

  std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      err_ << path << ": cannot read file\n";
      throw Exit{kInvalid};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::filesystem::path& path, const std::string& content) {
    std::ofstream o(path, std::ios::binary | std::ios::trunc);
    o << content;
    if (!o) {
      err_ << path.string() << ": cannot write file\n";
      throw Exit{kInvalid};
    }
  }

  std::filesystem::path ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      err_ << dir << ": cannot create directory: " << ec.message() << "\n";
      throw Exit{kInvalid};
    }
    return dir;
  }

  // Runs `load` on the file's content; reports every issue against the path.
  template <class Load>
  auto load(const std::string& path, Load&& loader) {
    const std::string text = read(path);
    try {
      return loader(text);
    } catch (const cmfuse::Error& e) {
      report(path, e);
      throw Exit{kInvalid};
    }
  }

  void report(const std::string& path, const cmfuse::Error& e) {
    for (const auto& issue : e.issues()) {
      err_ << path << ":" << (issue.where.empty() ? "" : issue.where + ":") << " " << style_.bad("error") << ": "
           << issue.message << "\n";
    }
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  Style style_;
};

inline std::string file_stem_for(const ComponentOntology& ocm) {
  std::string name = ocm.source + "." + ocm.origin;
  for (char& c : name) {
    if (c == '/' || c == '\\' || c == ' ' || static_cast<unsigned char>(c) < 0x20) c = '_';
  }
  return name;
}

struct Prepared {
  std::vector<ComponentOntology> ontologies;
  Alignment alignment;
};

inline Prepared prepare(Session& s, const std::string& set_a, const std::string& set_b,
                        const std::string& domain, const RunConfig& cfg) {
  const ComponentSet a = s.load(set_a, parse_component_set);
  const ComponentSet b = s.load(set_b, parse_component_set);
  const DomainOntology od = s.load(domain, load_domain_ontology);
  ComponentSet all;
  try {
    all = union_of(a, b);
  } catch (const cmfuse::Error& e) {
    s.report(set_a + "+" + set_b, e);
    throw Exit{kInvalid};
  }
  Prepared p;
  Diagnostics diags;
  for (const auto& d : check_layering(all)) diags.push_back("layering: " + d.message);
  for (const auto& c : all.components) p.ontologies.push_back(to_ontology(c, od, &diags));
  p.alignment = align(p.ontologies, od, cfg.sim);
  p.alignment.diagnostics = std::move(diags);
  return p;
}

inline int conflict_status(const Alignment& al, const RunConfig& cfg) {
  return cfg.fail_on_conflict && !al.conflicts.empty() ? kConflict : kOk;
}

// ---- commands ----------------------------------------------------------------

inline int cmd_validate(Session& s, const std::vector<std::string>& paths) {
  int status = kOk;
  for (const auto& path : paths) {
    std::string kind;
    try {
      const std::string text = s.read(path);
      const auto doc = cmfuse::detail::parse_json(text);
      if (doc.is_object() && doc.contains("components")) {
        kind = "component set";
        const ComponentSet set = parse_component_set(text);
        for (const auto& d : check_layering(set)) {
          s.err() << path << ": " << s.style().warn("warning") << ": " << d.message << "\n";
        }
      } else if (doc.is_object() && doc.contains("correspondences")) {
        kind = "alignment";
        parse_alignment(text);
      } else if (doc.is_object() && doc.contains("equivalences")) {
        kind = "representation ontology";
        if (!doc["concepts"].is_array()) throw cmfuse::Error(ErrorKind::syntax, "/concepts", "expected an array");
        for (std::size_t i = 0; i < doc["concepts"].size(); ++i) {
          ocm_from_json(doc["concepts"][i], cmfuse::detail::child("/concepts", i));
        }
      } else if (doc.is_object() && doc.contains("concepts")) {
        kind = "domain ontology";
        load_domain_ontology(text);
      } else if (doc.is_object() && doc.contains("root")) {
        kind = "component ontology";
        parse_ocm(text);
      } else {
        throw cmfuse::Error(ErrorKind::syntax, "/", "unrecognized document type");
      }
      s.out() << path << ": ok (" << kind << ")\n";
    } catch (const cmfuse::Error& e) {
      s.report(path, e);
      status = kInvalid;
    } catch (const Exit& e) {
      status = std::max(status, e.code);
    }
  }
  return status;
}

inline int cmd_transform(Session& s, const std::string& set_path, const std::string& domain,
                         const std::string& out_dir) {
  const ComponentSet set = s.load(set_path, parse_component_set);
  const DomainOntology od = s.load(domain, load_domain_ontology);
  const auto dir = s.ensure_dir(out_dir);
  Diagnostics diags;
  for (const auto& c : set.components) {
    const ComponentOntology ocm = to_ontology(c, od, &diags);
    const auto path = dir / (file_stem_for(ocm) + ".ocm.json");
    s.write(path, serialize_ocm(ocm));
    s.out() << path.string() << "\n";
  }
  for (const auto& d : diags) s.err() << s.style().warn("warning") << ": " << d << "\n";
  return kOk;
}

inline int cmd_sim(Session& s, const std::string& a_path, const std::string& b_path, const std::string& domain,
                   const RunConfig& cfg) {
  const ComponentOntology a = s.load(a_path, parse_ocm);
  const ComponentOntology b = s.load(b_path, parse_ocm);
  const DomainOntology od = s.load(domain, load_domain_ontology);
  const SimilarityMatrix mx = similarity_matrix(a, b, od, cfg.sim);
  if (cfg.format == Format::json) {
    s.out() << cmfuse::detail::dump(to_json(mx, cfg.sim));
  } else {
    s.out() << render_matrix_text(mx, s.style());
  }
  if (cfg.fail_on_conflict && mx.verdict == Verdict::not_synonym && mx.apparent_names_equal()) return kConflict;
  return kOk;
}

inline int cmd_align(Session& s, const std::string& a, const std::string& b, const std::string& domain,
                     const std::string& out_dir, const RunConfig& cfg) {
  const Prepared p = prepare(s, a, b, domain, cfg);
  const auto dir = s.ensure_dir(out_dir);
  s.write(dir / "alignment.json", serialize_alignment(p.alignment, p.ontologies, cfg.sim));
  s.out() << render_alignment_text(p.alignment, s.style());
  return conflict_status(p.alignment, cfg);
}

inline int cmd_merge(Session& s, const std::string& alignment_path, const std::string& out_dir) {
  const AlignmentDocument doc = s.load(alignment_path, parse_alignment);
  MergedComponent merged;
  try {
    merged = merge(doc.alignment, doc.ontologies);
  } catch (const cmfuse::Error& e) {
    s.report(alignment_path, e);
    throw Exit{kInvalid};
  }
  const auto dir = s.ensure_dir(out_dir);
  s.write(dir / "ocm_r.json", serialize_representation(merged.representation));
  s.write(dir / "cm_r.json", serialize_component_set(merged.result));
  s.out() << render_merge_text(merged, s.style());
  return kOk;
}

inline int cmd_report(Session& s, const std::string& alignment_path, const RunConfig& cfg) {
  const AlignmentDocument doc = s.load(alignment_path, parse_alignment);
  if (cfg.format == Format::json) {
    s.out() << render_alignment_json_report(doc.alignment);
  } else {
    s.out() << render_alignment_text(doc.alignment, s.style());
  }
  return kOk;
}

inline int cmd_pipeline(Session& s, const std::string& a, const std::string& b, const std::string& domain,
                        const std::string& out_dir, const RunConfig& cfg) {
  const Prepared p = prepare(s, a, b, domain, cfg);
  const MergedComponent merged = merge(p.alignment, p.ontologies);
  const auto dir = s.ensure_dir(out_dir);
  const std::string report = render_alignment_text(p.alignment) + "\n" + render_merge_text(merged);
  s.write(dir / "alignment.json", serialize_alignment(p.alignment, p.ontologies, cfg.sim));
  s.write(dir / "ocm_r.json", serialize_representation(merged.representation));
  s.write(dir / "cm_r.json", serialize_component_set(merged.result));
  s.write(dir / "report.txt", report);
  if (cfg.format == Format::json) {
    s.out() << render_alignment_json_report(p.alignment);
  } else {
    s.out() << render_alignment_text(p.alignment, s.style()) << "\n" << render_merge_text(merged, s.style());
  }
  return conflict_status(p.alignment, cfg);
}

}  // namespace detail

// Entry point shared by the executable and the tests. `args` excludes the
// program name.
inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Semantic integration of business-component models", "cmfuse"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string mode = "literal";
  std::string format = "text";
  bool no_recursive = false;
  auto add_sim_flags = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode, "Aggregation mode")->check(CLI::IsMember({"literal", "bipartite"}));
    cmd->add_flag("--no-recursive-semantics", no_recursive, "Fall back to syntactic similarity for composites");
    cmd->add_flag("--fail-on-conflict", cfg.fail_on_conflict, "Exit 3 when a homonym conflict is found");
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };

  std::vector<std::string> files;
  std::string first, second, domain, out_dir;

  auto* validate = app.add_subcommand("validate", "Parse and validate input documents");
  validate->add_option("files", files, "Documents to validate")->required();

  auto* transform = app.add_subcommand("transform", "Write one component ontology per component");
  transform->add_option("set", first, "Component-set file")->required();
  transform->add_option("--domain", domain, "Domain ontology file")->required();
  transform->add_option("-o,--output", out_dir, "Output directory")->required();

  auto* sim = app.add_subcommand("sim", "Similarity matrix of two component ontologies");
  sim->add_option("ocm_a", first, "First component ontology")->required();
  sim->add_option("ocm_b", second, "Second component ontology")->required();
  sim->add_option("--domain", domain, "Domain ontology file")->required();
  add_sim_flags(sim);
  add_format(sim);

  auto* align_cmd = app.add_subcommand("align", "Align two component sets");
  align_cmd->add_option("set_a", first, "First component set")->required();
  align_cmd->add_option("set_b", second, "Second component set")->required();
  align_cmd->add_option("--domain", domain, "Domain ontology file")->required();
  align_cmd->add_option("-o,--output", out_dir, "Output directory")->required();
  add_sim_flags(align_cmd);

  auto* merge_cmd = app.add_subcommand("merge", "Merge an alignment into a result component set");
  merge_cmd->add_option("alignment", first, "Alignment file")->required();
  merge_cmd->add_option("-o,--output", out_dir, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Summarize an alignment");
  report->add_option("alignment", first, "Alignment file")->required();
  add_format(report);

  auto* pipeline = app.add_subcommand("pipeline", "Align and merge two component sets");
  pipeline->add_option("set_a", first, "First component set")->required();
  pipeline->add_option("set_b", second, "Second component set")->required();
  pipeline->add_option("--domain", domain, "Domain ontology file")->required();
  pipeline->add_option("-o,--output", out_dir, "Output directory")->required();
  add_sim_flags(pipeline);
  add_format(pipeline);

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  cfg.sim.mode = *parse_mode(mode);
  cfg.sim.recursive_semantics = !no_recursive;
  cfg.format = format == "json" ? Format::json : Format::text;

  detail::Session s(out, err);
  try {
    if (*validate) return detail::cmd_validate(s, files);
    if (*transform) return detail::cmd_transform(s, first, domain, out_dir);
    if (*sim) return detail::cmd_sim(s, first, second, domain, cfg);
    if (*align_cmd) return detail::cmd_align(s, first, second, domain, out_dir, cfg);
    if (*merge_cmd) return detail::cmd_merge(s, first, out_dir);
    if (*report) return detail::cmd_report(s, first, cfg);
    if (*pipeline) return detail::cmd_pipeline(s, first, second, domain, out_dir, cfg);
  } catch (const detail::Exit& e) {
    return e.code;
  }
  return kUsage;
}

}  // namespace cmfuse::cli
