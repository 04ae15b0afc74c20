import pytest

from aspectcast.corpus import (
    CorpusError,
    Quarter,
    Review,
    group_by_quarter,
    parse_revenue,
    parse_reviews,
    reviews_to_jsonl,
)


class TestQuarter:
    def test_parse(self):
        q = Quarter.parse("2016Q4")
        assert (q.year, q.index) == (2016, 4)

    def test_invalid_index(self):
        with pytest.raises(CorpusError, match="invalid quarter"):
            Quarter.parse("2016Q5")

    def test_invalid_label(self):
        with pytest.raises(CorpusError):
            Quarter.parse("Q42016")

    def test_next_prev_roundtrip(self):
        for q in [Quarter(2016, 1), Quarter(2016, 4), Quarter(2017, 2)]:
            assert q.prev().next() == q
            assert q.next().prev() == q

    def test_ordering(self):
        qs = [Quarter(2017, 1), Quarter(2016, 4), Quarter(2016, 2)]
        assert sorted(qs) == [Quarter(2016, 2), Quarter(2016, 4), Quarter(2017, 1)]
        assert sorted(sorted(qs)) == sorted(qs)

    def test_str(self):
        assert str(Quarter(2016, 4)) == "2016Q4"


class TestParseReviews:
    def test_jsonl_single(self):
        data = b'{"id":"r1","quarter":"2016Q4","text":"great support"}'
        reviews = parse_reviews(data, "jsonl")
        assert reviews == [Review("r1", Quarter(2016, 4), "great support")]

    def test_csv_empty(self):
        assert parse_reviews(b"id,quarter,text\n", "csv") == []

    def test_csv_rows(self):
        data = b"id,quarter,text\nr1,2016Q4,good\nr2,2017Q1,bad\n"
        reviews = parse_reviews(data, "csv")
        assert [r.id for r in reviews] == ["r1", "r2"]

    def test_bad_quarter(self):
        data = b'{"id":"r1","quarter":"2016Q5","text":"x"}'
        with pytest.raises(CorpusError, match="invalid quarter"):
            parse_reviews(data, "jsonl")

    def test_empty_text_names_review(self):
        data = b'{"id":"r9","quarter":"2016Q4","text":"  "}'
        with pytest.raises(CorpusError, match="r9"):
            parse_reviews(data, "jsonl")

    def test_duplicate_id(self):
        data = (
            b'{"id":"r1","quarter":"2016Q4","text":"a"}\n'
            b'{"id":"r1","quarter":"2016Q4","text":"b"}'
        )
        with pytest.raises(CorpusError, match="duplicate"):
            parse_reviews(data, "jsonl")

    def test_malformed_line_number(self):
        data = b'{"id":"r1","quarter":"2016Q4","text":"a"}\n{broken'
        with pytest.raises(CorpusError, match="line 2"):
            parse_reviews(data, "jsonl")

    def test_roundtrip(self):
        data = (
            b'{"id":"r1","quarter":"2016Q4","text":"great support","source":"g2"}\n'
            b'{"id":"r2","quarter":"2017Q1","text":"slow and buggy"}\n'
        )
        reviews = parse_reviews(data, "jsonl")
        assert parse_reviews(reviews_to_jsonl(reviews), "jsonl") == reviews


class TestParseRevenue:
    def test_basic(self):
        series = parse_revenue(b"quarter,revenue\n2015Q4,100\n2016Q1,110\n")
        assert len(series) == 2
        assert series[Quarter(2016, 1)] == 110

    def test_unsorted_input(self):
        series = parse_revenue(b"quarter,revenue\n2016Q1,110\n2015Q4,100\n")
        assert series.quarters[0] == Quarter(2015, 4)

    def test_gap(self):
        with pytest.raises(CorpusError, match="missing 2016Q1"):
            parse_revenue(b"quarter,revenue\n2015Q4,100\n2016Q2,120\n")

    def test_non_positive(self):
        with pytest.raises(CorpusError, match="non-positive"):
            parse_revenue(b"quarter,revenue\n2016Q1,-5\n")


class TestGroupByQuarter:
    def test_empty(self):
        assert group_by_quarter([]) == {}

    def test_partition(self):
        q4 = Quarter(2016, 4)
        q1 = Quarter(2017, 1)
        reviews = [Review(f"r{i}", q4 if i < 3 else q1, "text") for i in range(4)]
        groups = group_by_quarter(reviews)
        assert len(groups[q4]) == 3 and len(groups[q1]) == 1
        # multiset equality: nothing dropped or duplicated
        regrouped = [r for grp in groups.values() for r in grp]
        assert sorted(regrouped, key=lambda r: r.id) == sorted(reviews, key=lambda r: r.id)

    def test_table2_sized_group(self):
        q = Quarter(2016, 4)
        reviews = [Review(f"r{i}", q, "support was good") for i in range(12)]
        assert len(group_by_quarter(reviews)[q]) == 12
