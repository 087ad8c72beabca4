#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "laws.hpp"
#include "principar/lexicon.hpp"
#include "principar/sexpr.hpp"

namespace {

using namespace principar;
namespace fs = std::filesystem;
using principar::laws::data_path;
using principar::laws::english_network;
using principar::laws::load_text_lexicon;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

TEST(SExpr, ParsesAtomsListsQuotesAndComments) {
    auto all = parse_sexprs("; comment\n(a (b \"c d\") ,) e");
    ASSERT_EQ(all.size(), 2u);
    ASSERT_TRUE(all[0].is_list());
    ASSERT_EQ(all[0].items.size(), 3u);
    EXPECT_EQ(all[0].items[1].items[1].atom, "c d");
    EXPECT_TRUE(all[0].items[1].items[1].quoted);
    EXPECT_TRUE(all[1].is_atom());
    EXPECT_EQ(render_sexpr(all[0]), "(a (b \"c d\"),)");
    EXPECT_EQ(render_sexpr(parse_sexpr(render_sexpr(all[0]))), render_sexpr(all[0]));
}

TEST(SExpr, ReportsPositions) {
    try {
        parse_sexprs("(a\n (b)");
        FAIL();
    } catch (const SExprError& e) {
        EXPECT_GE(e.line(), 1);
    }
    EXPECT_THROW(parse_sexpr("a b"), SExprError);
    EXPECT_THROW(parse_sexprs(")"), SExprError);
}

TEST(Lexicon, BundledEntriesRoundTrip) {
    auto net = english_network();
    const auto& reg = net.registry;
    auto exprs = parse_sexprs(slurp(data_path("toy.lex")));
    ASSERT_GT(exprs.size(), 20u);
    for (const auto& e : exprs) {
        auto entry = entry_from_sexpr(reg, e);
        auto text = render_entry(reg, entry);
        auto again = parse_entry(reg, text);
        EXPECT_TRUE(entry == again) << text;
        EXPECT_EQ(render_entry(reg, again), text);
    }
}

TEST(Lexicon, EntryShapeErrors) {
    auto net = english_network();
    const auto& reg = net.registry;
    EXPECT_THROW(parse_entry(reg, "(word)"), LexiconError);
    EXPECT_THROW(parse_entry(reg, "(word (frob x))"), LexiconError);
    EXPECT_THROW(parse_entry(reg, "(word (subcat))"), LexiconError);
    EXPECT_THROW(parse_entry(reg, "(word (ref ((cat v))))"), LexiconError);
    EXPECT_ANY_THROW(parse_entry(reg, "(word (subcat ((cat zz))))"));
    EXPECT_THROW(check_entry_shape(parse_sexpr("(word (frob x))")), LexiconError);
    EXPECT_EQ(check_entry_shape(parse_sexpr("(Word (subcat ((cat n))))")), "word");
}

TEST(Lexicon, RefsInheritFromTheBaseSense) {
    auto net = english_network();
    const auto& reg = net.registry;
    auto store = load_text_lexicon(reg, data_path("toy.lex"));

    auto left = entry_senses(*store->get("left"), *store);
    ASSERT_EQ(left.size(), 1u);
    EXPECT_EQ(left[0].word, "left");
    EXPECT_TRUE(left[0].self.has(reg.valued("tense", "past")));
    EXPECT_TRUE(left[0].self.has(reg.valued("cat", "v")));
    EXPECT_TRUE(left[0].comps.empty());

    auto did = entry_senses(*store->get("did"), *store);
    ASSERT_EQ(did.size(), 3u);
    EXPECT_TRUE(did[0].self.has(reg.valued("cat", "i")));
    EXPECT_EQ(did[1].comps.size(), 1u);
    EXPECT_EQ(did[2].comps.size(), 2u);
    EXPECT_TRUE(did[2].self.has(reg.valued("rare", "very-very")));
    EXPECT_TRUE(did[2].self.has(reg.valued("tense", "past")));
    EXPECT_EQ(resolve_ref(*store->get("did"), *store).size(), 2u);
}

TEST(Lexicon, RefErrors) {
    auto net = english_network();
    const auto& reg = net.registry;
    LexiconStore store(reg);
    store.put_memory(parse_entry(reg, "(orphan (ref ((cat v)) (nothing (cat))))"));
    EXPECT_THROW(entry_senses(*store.get("orphan"), store), LexiconError);

    store.put_memory(parse_entry(reg, "(r0 (subcat ((cat v))))"));
    for (int i = 1; i <= 6; ++i)
        store.put_memory(parse_entry(reg, "(r" + std::to_string(i) + " (ref () (r" + std::to_string(i - 1) + " (cat))))"));
    EXPECT_EQ(entry_senses(*store.get("r4"), store).size(), 1u);
    EXPECT_THROW(entry_senses(*store.get("r6"), store), LexiconError);
}

TEST(Lexicon, PhrasesCoverSeveralTokens) {
    auto net = english_network();
    auto store = load_text_lexicon(net.registry, data_path("toy.lex"));
    std::vector<std::string> tokens = {"the", "down", "payment", "left"};
    auto matches = expand_phrases(*store->get("payment"), tokens, 2, *store);
    ASSERT_EQ(matches.size(), 1u);
    EXPECT_EQ(matches[0].first, 1u);
    EXPECT_EQ(matches[0].last, 2u);
    EXPECT_EQ(matches[0].sense.word, "down payment");
    EXPECT_EQ(matches[0].sense.span_width, 2);
    EXPECT_EQ(matches[0].sense.lead, 1);

    auto senses = lookup_senses(*store, tokens, 2);
    ASSERT_EQ(senses.size(), 2u);
    EXPECT_EQ(senses[0].span_width, 1);
    EXPECT_EQ(senses[1].span_width, 2);
    EXPECT_TRUE(expand_phrases(*store->get("payment"), {"payment"}, 0, *store).empty());
}

TEST(Morphology, StripsSuffixesInRuleOrder) {
    auto net = english_network();
    Morphology m(net.registry);
    auto bases = [&](const std::string& w) {
        std::vector<std::string> out;
        for (const auto& c : m.strip(w)) out.push_back(c.base);
        return out;
    };
    EXPECT_EQ(bases("studies"), (std::vector<std::string>{"studie", "studi", "study"}));
    EXPECT_EQ(bases("walked"), (std::vector<std::string>{"walk", "walke"}));
    auto stopped = bases("stopped");
    EXPECT_NE(std::find(stopped.begin(), stopped.end(), "stop"), stopped.end());
    EXPECT_TRUE(bases("as").empty());
    for (const auto& c : m.strip("walked")) EXPECT_FALSE(c.readings.empty()) << c.rule;
}

TEST(Lexicon, InflectedWordsUseTheBaseEntry) {
    auto net = english_network();
    const auto& reg = net.registry;
    auto store = load_text_lexicon(reg, data_path("toy.lex"));
    auto senses = lookup_senses(*store, {"kim", "walked"}, 1);
    ASSERT_FALSE(senses.empty());
    for (const auto& s : senses) {
        EXPECT_EQ(s.word, "walked");
        EXPECT_TRUE(s.self.has(reg.valued("cat", "v")));
    }
    EXPECT_TRUE(lookup_senses(*store, {"zzxq"}, 0).empty());
}

TEST(LexiconStore, PrimaryShadowsSecondary) {
    auto net = english_network();
    const auto& reg = net.registry;
    TempDir dir("principar_store_test");
    auto stats = compile_secondary("(alpha (subcat ((cat n))))\n(beta (subcat ((cat v))))\n",
                                   (dir.path / "secondary.plex").string());
    EXPECT_EQ(stats.entries, 2u);
    {
        auto store = LexiconStore::open_dir(reg, dir.path.string());
        ASSERT_NE(store->secondary(), nullptr);
        EXPECT_EQ(render_entry(reg, *store->get("alpha")), "(alpha (subcat ((cat n))))");
        EXPECT_FALSE(store->get("gamma").has_value());
        store->put(parse_entry(reg, "(alpha (subcat ((cat d))))"));
        EXPECT_EQ(render_entry(reg, *store->get("alpha")), "(alpha (subcat ((cat d))))");
        auto c = store->counters();
        EXPECT_EQ(c.secondary_hits, 1u);
        EXPECT_EQ(c.misses, 1u);
        EXPECT_EQ(c.primary_hits, 1u);
    }
    auto reopened = LexiconStore::open_dir(reg, dir.path.string());
    EXPECT_EQ(render_entry(reg, *reopened->get("alpha")), "(alpha (subcat ((cat d))))");
    EXPECT_EQ(render_entry(reg, *reopened->get("beta")), "(beta (subcat ((cat v))))");
    EXPECT_TRUE(fs::exists(dir.path / "primary.lex"));
}

TEST(LexiconStore, CompileErrorsNameTheEntry) {
    TempDir dir("principar_compile_test");
    try {
        compile_secondary("(a (subcat ((cat n))))\n(b (bogus))\n", (dir.path / "t.plex").string());
        FAIL();
    } catch (const LexiconError& e) {
        EXPECT_NE(std::string(e.what()).find("entry 2"), std::string::npos) << e.what();
    }
    EXPECT_THROW(LexiconStore::open_dir(english_network().registry, (dir.path / "missing").string()),
                 LexiconError);
}

TEST(SecondaryTable, StoresAndFindsRecords) {
    TempDir dir("principar_table_test");
    auto path = (dir.path / "t.plex").string();
    std::vector<std::pair<std::string, std::string>> recs;
    for (int i = 0; i < 500; ++i) recs.emplace_back("k" + std::to_string(i), "v" + std::to_string(i));
    recs.emplace_back("k7", "later");
    auto stats = write_secondary_table(path, recs);
    EXPECT_EQ(stats.entries, 500u);
    SecondaryTable t(path);
    EXPECT_EQ(t.entry_count(), 500u);
    EXPECT_EQ(*t.find("k499"), "v499");
    EXPECT_EQ(*t.find("k7"), "later");
    EXPECT_FALSE(t.find("nope").has_value());
    EXPECT_EQ(t.scan().size(), 500u);
    EXPECT_THROW(SecondaryTable((dir.path / "absent").string()), LexiconError);
}

TEST(SecondaryTable, DetectsCorruption) {
    TempDir dir("principar_table_corrupt");
    auto path = (dir.path / "t.plex").string();
    write_secondary_table(path, {{"key", "value-value-value"}});
    {
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(-8, std::ios::end);
        f.put('X');
    }
    SecondaryTable t(path);
    EXPECT_THROW(t.find("key"), LexiconError);
}

}  // namespace
