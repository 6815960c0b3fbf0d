#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "potfuse/error.hpp"
#include "potfuse/io_data.hpp"
#include "potfuse/linear_models.hpp"

using namespace potfuse;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("csv basic parse") {
  const Dataset d = parse_csv("f1,f2,label\n1,2,a\n3,4,b\n5,6,a\n", "t");
  CHECK(d.size() == 3);
  CHECK(d.dim() == 2);
  CHECK(d.n_classes() == 2);
  CHECK(d.labels == std::vector<int>{0, 1, 0});
  CHECK(d.class_names == std::vector<std::string>{"a", "b"});
  CHECK(d.feature_names == std::vector<std::string>{"f1", "f2"});
  CHECK(d.features(2, 1) == 6.0);
}

TEST_CASE("csv categorical one-hot and label selection") {
  const std::string text = "colour,x,cls\nx,1.5,p\ny,2,n\nz,-1,p\ny,0,n\n";
  const Dataset d = parse_csv(text, "t");
  CHECK(d.dim() == 4);  // 3 one-hot + 1 numeric
  CHECK(d.features.row(0).head(3) == Eigen::RowVector3d(1, 0, 0));
  CHECK(d.features.row(3).head(3) == Eigen::RowVector3d(0, 1, 0));
  CHECK(d.features(0, 3) == 1.5);

  CsvOptions by_name;
  by_name.label_name = "colour";
  const Dataset e = parse_csv(text, "t", by_name);
  CHECK(e.n_classes() == 3);
  CHECK(e.dim() == 3);  // x numeric + cls one-hot {p, n}

  CsvOptions by_index;
  by_index.label_index = 0;
  CHECK(parse_csv(text, "t", by_index).n_classes() == 3);

  CsvOptions missing;
  missing.label_name = "nope";
  CHECK_THROWS_AS(parse_csv(text, "t", missing), InputError);
}

TEST_CASE("csv quoting, delimiters, header-less and bom") {
  const Dataset q = parse_csv("\xEF\xBB\xBF\"a,b\",\"say \"\"hi\"\"\",y\n1,\"2\",u\n3,4,v\r\n", "t");
  CHECK(q.feature_names[0] == "a,b");
  CHECK(q.feature_names[1] == "say \"hi\"");
  CHECK(q.features(0, 1) == 2.0);

  CsvOptions semi;
  semi.delimiter = ';';
  semi.header = false;
  const Dataset s = parse_csv("1;2;a\n3;4;b\n", "t", semi);
  CHECK(s.size() == 2);
  CHECK(s.dim() == 2);
}

TEST_CASE("csv rows with missing cells are dropped") {
  const Dataset d = parse_csv("x,y,c\n1,2,a\n,3,b\n4,?,a\n5,6,b\n7,NA,b\n", "t");
  CHECK(d.size() == 2);
  CHECK(d.dropped_rows == 3);
}

TEST_CASE("csv errors") {
  CHECK_THROWS_AS(parse_csv("x,c\n1,a\n2,a\n", "t"), InputError);     // single class
  CHECK_THROWS_AS(parse_csv("x,c\n", "t"), InputError);               // empty
  CHECK_THROWS_AS(parse_csv("x,c\n1,a\n2,b,3\n", "t"), InputError);   // ragged
  CHECK(error_of([] { parse_csv("x,c\n1,a\n2,b,3\n", "t"); }).find('3') != std::string::npos);
  CHECK_THROWS_AS(parse_csv("x,c\n\"1,a\n", "t"), InputError);        // unterminated quote
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), InputError);
}

TEST_CASE("one-hot column count equals numeric plus cardinalities") {
  const Dataset d = parse_csv("a,b,c,d,cls\n1,u,k,2,0\n2,v,k,3,1\n3,w,m,4,0\n4,u,k,5,1\n", "t");
  CHECK(d.dim() == 2 + 3 + 2);
}

TEST_CASE("arff parse") {
  const std::string minimal =
      "% comment\n@RELATION toy\n@attribute a numeric\n@ATTRIBUTE b REAL\n@attribute class {p,n}\n@data\n"
      "1,2,p\n3,4,n\n5,6,p\n7,8,n\n";
  const Dataset d = parse_arff(minimal, "toy");
  CHECK(d.size() == 4);
  CHECK(d.dim() == 2);
  CHECK(d.n_classes() == 2);
  CHECK(d.class_names == std::vector<std::string>{"p", "n"});

  const Dataset colour = parse_arff(
      "@relation c\n@attribute colour {red, blue}\n@attribute x numeric\n@attribute y {a,b}\n@data\n"
      "red,1,a\nblue,2,b\n?,3,a\nblue,4,a\n",
      "c");
  CHECK(colour.dim() == 3);
  CHECK(colour.size() == 3);
  CHECK(colour.dropped_rows == 1);

  const Dataset class_first = parse_arff(
      "@relation c\n@attribute class {a,b}\n@attribute x numeric\n@data\na,1\nb,2\n", "c");
  CHECK(class_first.dim() == 1);
  CHECK(class_first.labels == std::vector<int>{0, 1});
}

TEST_CASE("keel header with inputs and outputs") {
  const Dataset d = parse_arff(
      "@relation k\n@attribute Out {x,y}\n@attribute A real [0, 10]\n@attribute B integer [1, 5]\n"
      "@inputs A, B\n@outputs Out\n@data\nx, 1.0, 2\ny, 3.5, 4\n",
      "k");
  CHECK(d.dim() == 2);
  CHECK(d.labels == std::vector<int>{0, 1});
  CHECK(d.features(1, 0) == 3.5);
}

TEST_CASE("arff errors") {
  const std::string bad = "@relation r\n@attribute a numeric\n@attribute broken\n@attribute c {x,y}\n@data\n1,x\n";
  const std::string msg = error_of([&] { parse_arff(bad, "r"); });
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK_THROWS_AS(parse_arff("@relation r\n@attribute a numeric\n@attribute c {x,y}\n@data\n{0 1, 1 x}\n", "r"),
                  InputError);
  CHECK_THROWS_AS(parse_arff("@relation r\n@attribute a numeric\n@attribute c {x,y}\n@data\n1,x\n2,z\n", "r"),
                  InputError);
}

TEST_CASE("sample data files load") {
  const std::filesystem::path root = POTFUSE_SOURCE_DIR;
  const Dataset w = load_dataset(root / "data" / "weather.arff");
  CHECK(w.size() == 14);
  CHECK(w.dim() == 3 + 2 + 2);
  CHECK(w.class_counts() == std::vector<std::size_t>{5, 9});  // labels in first-appearance order
  CHECK(w.imbalance_ratio() == doctest::Approx(1.8));
  const Dataset t = load_dataset(root / "data" / "three_class.csv");
  CHECK(t.n_classes() == 3);
  CHECK(t.dim() == 6);
  CHECK(load_dataset(root / "data" / "three_class.csv").features == t.features);
}

TEST_CASE("banana generator") {
  const Dataset clean = make_banana(4, 0.0, 0);
  CHECK(clean.size() == 8);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(std::hypot(clean.features(i, 0), clean.features(i, 1)) == doctest::Approx(1.0));
    CHECK(std::hypot(clean.features(4 + i, 0) - 1.0, clean.features(4 + i, 1) - 0.5) == doctest::Approx(1.0));
  }
  CHECK(make_banana(50, 0.15, 3).features == make_banana(50, 0.15, 3).features);
  CHECK(make_banana(50, 0.15, 3).features != make_banana(50, 0.15, 4).features);

  // Interleaved: a single linear model on the whole set stays near 0.9 or below.
  const Dataset b = make_banana(200, 0.15, 0);
  TrainSet t{b.features, {}};
  for (int l : b.labels) t.labels.push_back(l == 0 ? 1 : -1);
  const LinearModel m = train_logistic(t);
  int ok = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i) ok += m.classify(t.points.row(i).transpose()) == t.labels[i];
  CHECK(ok / 400.0 <= 0.92);
  CHECK(ok / 400.0 >= 0.75);
}

TEST_CASE("csv round trip") {
  const Dataset b = make_blobs(10, 4.0, 1.0, 1);
  const auto path = std::filesystem::temp_directory_path() / "potfuse_roundtrip.csv";
  write_csv(b, path);
  const Dataset back = load_csv(path);
  CHECK(back.features == b.features);
  CHECK(back.labels == b.labels);
  std::filesystem::remove(path);
}
