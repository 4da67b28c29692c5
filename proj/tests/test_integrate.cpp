#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace cmfuse;
using support::atom;
using support::composite;
using support::member_terms;
using support::ontologies_of;

namespace {

ComponentSet load_set(const std::string& rel) {
  return parse_component_set(support::read_file(support::data_path(rel)));
}

std::vector<Correspondence> roots_of(const Alignment& al) {
  std::vector<Correspondence> out;
  for (const auto& c : al.correspondences) {
    if (c.root_level()) out.push_back(c);
  }
  return out;
}

const BusinessComponent* find_component(const ComponentSet& set, const std::string& name) {
  for (const auto& c : set.components) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

TEST(Classify, TruthTable) {
  EXPECT_EQ(classify(true, Verdict::synonym), Classification::equivalent);
  EXPECT_EQ(classify(false, Verdict::synonym), Classification::synonym_pair);
  EXPECT_EQ(classify(true, Verdict::not_synonym), Classification::homonym_conflict);
  EXPECT_EQ(classify(false, Verdict::not_synonym), Classification::distinct);
}

TEST(Align, LibraryFixture) {
  support::LibraryFixture fx;
  const auto al = align(fx.all(), fx.od);
  const auto roots = roots_of(al);
  // two sources with two components each: four cross-source pairs
  ASSERT_EQ(roots.size(), 4u);
  std::map<std::string, Classification> by_pair;
  for (const auto& c : roots) by_pair[c.left.origin + "|" + c.right.origin] = c.classification;
  EXPECT_EQ(by_pair["Personne|Lecteur"], Classification::synonym_pair);
  EXPECT_EQ(by_pair["Publication|Publication"], Classification::homonym_conflict);
  EXPECT_EQ(by_pair["Personne|Publication"], Classification::distinct);
  EXPECT_EQ(by_pair["Publication|Lecteur"], Classification::distinct);
  ASSERT_EQ(al.conflicts.size(), 1u);
  EXPECT_EQ(al.conflicts[0].score, Score(2, 3));
  EXPECT_EQ(al.domain_labels.at("PERSON"), "personne");
  EXPECT_EQ(al.domain_labels.at("ACT-READ"), "lire");
}

TEST(Align, MemberCorrespondencesForScoreOneCells) {
  support::LibraryFixture fx;
  const auto al = align({fx.personne(), fx.lecteur()}, fx.od);
  std::vector<std::string> members;
  for (const auto& c : al.correspondences) {
    if (!c.root_level()) members.push_back(*c.left.member + "=" + *c.right.member + ":" + std::string(to_string(c.classification)));
  }
  EXPECT_EQ(members, (std::vector<std::string>{"numéro lecteur=numéro lecteur:equivalent", "prénom=prénom:equivalent",
                                               "nom=nom:equivalent", "consulter()=lire():synonym_pair"}));
}

TEST(Align, SingletonHasNoCorrespondences) {
  support::LibraryFixture fx;
  EXPECT_TRUE(align({fx.personne()}, fx.od).correspondences.empty());
  EXPECT_TRUE(align({}, fx.od).correspondences.empty());
}

TEST(Align, SameSourcePairsAreSkipped) {
  support::LibraryFixture fx;
  EXPECT_TRUE(align({fx.personne(), fx.publication1()}, fx.od).correspondences.empty());
}

TEST(Align, CopiesFromDifferentSourcesAreEquivalent) {
  support::LibraryFixture fx;
  auto copy = fx.publication1();
  copy.source = "Copie";
  const auto roots = roots_of(align({fx.publication1(), copy}, fx.od));
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_EQ(roots[0].classification, Classification::equivalent);
  EXPECT_EQ(roots[0].score, Score::one());
}

TEST(Align, ClientPairIsHomonymConflict) {
  const DomainOntology od;
  const auto a = ontologies_of(load_set("client/client_a.json"), od);
  const auto b = ontologies_of(load_set("client/client_b.json"), od);
  const auto al = align({a[0], b[0]}, od);
  const auto conflicts = detect_naming_conflicts(al);
  ASSERT_EQ(conflicts.size(), 1u);
  EXPECT_EQ(conflicts[0].classification, Classification::homonym_conflict);
  EXPECT_EQ(conflicts[0].score, Score(1, 2));
}

TEST(DetectNamingConflicts, LibraryFixture) {
  support::LibraryFixture fx;
  const auto conflicts = detect_naming_conflicts(align(fx.all(), fx.od));
  ASSERT_EQ(conflicts.size(), 2u);
  EXPECT_EQ(conflicts[0].left.origin, "Personne");
  EXPECT_EQ(conflicts[0].classification, Classification::synonym_pair);
  EXPECT_EQ(conflicts[1].left.origin, "Publication");
  EXPECT_EQ(conflicts[1].classification, Classification::homonym_conflict);
}

TEST(DetectNamingConflicts, AllDistinctIsEmpty) {
  ComponentOntology a, b;
  a.source = "A";
  a.origin = "Alpha";
  a.root = composite("Alpha", {atom("x")});
  b.source = "B";
  b.origin = "Beta";
  b.root = composite("Beta", {atom("y")});
  EXPECT_TRUE(detect_naming_conflicts(align({a, b}, DomainOntology{})).empty());
}

TEST(Merge, LibraryFixture) {
  support::LibraryFixture fx;
  const auto set = fx.all();
  const auto merged = merge(align(set, fx.od), set);
  const auto& comps = merged.result.components;
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(merged.result.system, "Biblio1+Biblio2");

  const auto* personne = find_component(merged.result, "Personne");
  ASSERT_NE(personne, nullptr);
  EXPECT_EQ(member_terms(*personne), (std::vector<Term>{"numéro lecteur", "prénom", "nom", "lire()"}));
  EXPECT_EQ(personne->provides, (std::vector<std::string>{"lire()"}));

  const auto* p1 = find_component(merged.result, "Biblio1.Publication");
  const auto* p2 = find_component(merged.result, "Biblio2.Publication");
  ASSERT_NE(p1, nullptr);
  ASSERT_NE(p2, nullptr);
  EXPECT_EQ(member_terms(*p1), (std::vector<Term>{"titre", "éditeur", "périodicité"}));
  EXPECT_EQ(member_terms(*p2), (std::vector<Term>{"titre", "éditeur"}));
  EXPECT_EQ(p1->requires_, (std::vector<std::string>{"lire()"}));
  EXPECT_EQ(p2->requires_, (std::vector<std::string>{"lire()"}));

  const auto& links = merged.representation.equivalences;
  const auto has = [&](const std::string& a, const std::string& b) {
    return std::find(links.begin(), links.end(), std::make_pair(a, b)) != links.end();
  };
  EXPECT_TRUE(has("Biblio1/Personne", "Biblio2/Lecteur"));
  EXPECT_TRUE(has("Biblio1/Personne/consulter()", "Biblio2/Lecteur/lire()"));
  EXPECT_FALSE(has("Biblio1/Publication", "Biblio2/Publication"));
}

TEST(Merge, EmptyAlignmentIsIdentity) {
  support::LibraryFixture fx;
  const auto one = fx.personne();
  const auto merged = merge(Alignment{}, {one});
  ASSERT_EQ(merged.result.components.size(), 1u);
  const auto& out = merged.result.components[0];
  const auto& in = fx.component(fx.biblio1, "Personne");
  EXPECT_EQ(out.name, in.name);
  EXPECT_EQ(out.kind, in.kind);
  EXPECT_EQ(member_terms(out), member_terms(in));
  EXPECT_EQ(out.provides, in.provides);
  EXPECT_TRUE(merged.representation.equivalences.empty());
}

TEST(Merge, EquivalentRootsCollapse) {
  support::LibraryFixture fx;
  auto copy = fx.publication1();
  copy.source = "Copie";
  const std::vector<ComponentOntology> set{fx.publication1(), copy};
  const auto merged = merge(align(set, fx.od), set);
  ASSERT_EQ(merged.result.components.size(), 1u);
  EXPECT_EQ(merged.result.components[0].name, "Publication");
  EXPECT_EQ(member_terms(merged.result.components[0]), (std::vector<Term>{"titre", "éditeur", "périodicité"}));
  const auto& links = merged.representation.equivalences;
  EXPECT_NE(std::find(links.begin(), links.end(), std::make_pair(std::string("Biblio1/Publication"), std::string("Copie/Publication"))),
            links.end());
}

TEST(Merge, UnknownRootIsReferenceError) {
  support::LibraryFixture fx;
  Alignment al;
  al.correspondences.push_back({{"Biblio1", "Personne", std::nullopt},
                                {"Nulle", "Part", std::nullopt},
                                Score::one(),
                                Classification::synonym_pair});
  try {
    merge(al, {fx.personne()});
    FAIL() << "expected a reference error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::reference);
    ASSERT_EQ(e.issues().size(), 1u);
    EXPECT_EQ(e.issues()[0].where, "/correspondences/0");
  }
}

TEST(Merge, UnknownMemberIsReferenceError) {
  support::LibraryFixture fx;
  Alignment al;
  al.correspondences.push_back({{"Biblio1", "Personne", Term("fantôme")},
                                {"Biblio2", "Lecteur", Term("nom")},
                                Score::one(),
                                Classification::synonym_pair});
  EXPECT_THROW(merge(al, {fx.personne(), fx.lecteur()}), Error);
}

TEST(AlignmentFile, RoundTrip) {
  support::LibraryFixture fx;
  const auto set = fx.all();
  const SimOptions opt{AggregationMode::bipartite, false};
  const auto al = align(set, fx.od, opt);
  const std::string text = serialize_alignment(al, set, opt);
  const auto doc = parse_alignment(text);
  EXPECT_EQ(doc.alignment, al);
  EXPECT_EQ(doc.ontologies, set);
  EXPECT_EQ(doc.options.mode, AggregationMode::bipartite);
  EXPECT_FALSE(doc.options.recursive_semantics);
  EXPECT_EQ(serialize_alignment(doc.alignment, doc.ontologies, doc.options), text);
}

TEST(AlignmentFile, RejectsBadEntries) {
  EXPECT_THROW(parse_alignment("{}"), Error);
  EXPECT_THROW(parse_alignment(R"({"correspondences": [{"left": {"source": "a", "origin": "b"},
      "right": {"source": "c", "origin": "d"}, "score": "3/2", "class": "equivalent"}], "conflicts": [], "diagnostics": []})"),
               Error);
  EXPECT_THROW(parse_alignment(R"({"correspondences": [{"left": {"source": "a", "origin": "b"},
      "right": {"source": "c", "origin": "d"}, "score": "1", "class": "friends"}], "conflicts": [], "diagnostics": []})"),
               Error);
  EXPECT_NO_THROW(parse_alignment(R"({"correspondences": [], "conflicts": [], "diagnostics": []})"));
}

// ---- properties -----------------------------------------------------------------------

TEST(IntegrateProperties, ClassificationSymmetric) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto od = support::random_ontology(rng);
    const auto a = support::random_set(rng, "A");
    const auto b = support::random_set(rng, "B");
    const auto sa = ontologies_of(a, od), sb = ontologies_of(b, od);
    std::vector<ComponentOntology> ab = sa, ba = sb;
    ab.insert(ab.end(), sb.begin(), sb.end());
    ba.insert(ba.end(), sa.begin(), sa.end());
    const auto forward = roots_of(align(ab, od));
    const auto backward = roots_of(align(ba, od));
    ASSERT_EQ(forward.size(), backward.size());
    for (const auto& f : forward) {
      auto it = std::find_if(backward.begin(), backward.end(),
                             [&](const Correspondence& x) { return x.left == f.right && x.right == f.left; });
      ASSERT_NE(it, backward.end());
      EXPECT_EQ(it->classification, f.classification);
      EXPECT_EQ(it->score, f.score);
    }
  }
}

TEST(IntegrateProperties, ConservationAndClassCount) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 500; ++i) {
    const auto od = support::random_ontology(rng);
    const auto set = support::random_two_source_set(rng, od);
    const auto al = align(set, od);
    const auto merged = merge(al, set);
    EXPECT_EQ(merged.result.components.size(), support::root_class_count(set, al));
    const auto lost = support::lost_members(set, merged);
    EXPECT_TRUE(lost.empty()) << lost.front();
  }
}

TEST(IntegrateProperties, MergeIsIdempotent) {
  std::mt19937_64 rng(33);
  int tested = 0;
  for (int i = 0; i < 20000 && tested < 500; ++i) {
    const auto od = support::random_ontology(rng);
    const auto set = support::random_two_source_set(rng, od);
    const ComponentSet first = merge(align(set, od), set).result;
    const auto second = support::self_merge(first, od);
    if (!second) continue;
    ++tested;
    EXPECT_EQ(support::shape_of(*second), support::shape_of(first));
  }
  EXPECT_GE(tested, 500);
}
