#include <sqlite3.h>

#include <json.hpp>

#include "proseek/error.hpp"
#include "proseek/retrieval.hpp"

namespace proseek {

namespace {

class Statement {
public:
    Statement(sqlite3* db, const char* sql) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
            throw Error(std::string("sqlite prepare failed: ") + sqlite3_errmsg(db));
        }
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    sqlite3_stmt* get() const { return stmt_; }

    void bind_text(int i, const std::string& s) { sqlite3_bind_text(stmt_, i, s.data(), static_cast<int>(s.size()), SQLITE_TRANSIENT); }
    void bind_null(int i) { sqlite3_bind_null(stmt_, i); }
    void bind_int(int i, int v) { sqlite3_bind_int(stmt_, i, v); }

    std::string column_text(int i) const {
        auto* p = reinterpret_cast<const char*>(sqlite3_column_text(stmt_, i));
        return p ? std::string(p, static_cast<std::size_t>(sqlite3_column_bytes(stmt_, i))) : std::string();
    }
    bool column_null(int i) const { return sqlite3_column_type(stmt_, i) == SQLITE_NULL; }

private:
    sqlite3_stmt* stmt_ = nullptr;
};

}  // namespace

MetadataStore::MetadataStore(const std::string& path) {
    if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                        nullptr) != SQLITE_OK) {
        std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        throw Error("cannot open metadata store " + path + ": " + msg);
    }
    exec("CREATE TABLE IF NOT EXISTS documents ("
         "id TEXT PRIMARY KEY, title TEXT NOT NULL, abstract TEXT NOT NULL, "
         "authors TEXT NOT NULL, year INTEGER, url TEXT)");
}

MetadataStore::~MetadataStore() { sqlite3_close(db_); }

void MetadataStore::exec(const char* sql) const {
    char* err = nullptr;
    if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string msg = err ? err : "unknown error";
        sqlite3_free(err);
        throw Error("sqlite: " + msg);
    }
}

void MetadataStore::begin() {
    std::lock_guard lock(mu_);
    exec("BEGIN");
}

void MetadataStore::commit() {
    std::lock_guard lock(mu_);
    exec("COMMIT");
}

bool MetadataStore::insert(const CorpusDocument& doc) {
    std::lock_guard lock(mu_);
    Statement st(db_, "INSERT OR IGNORE INTO documents (id, title, abstract, authors, year, url) VALUES (?,?,?,?,?,?)");
    st.bind_text(1, doc.doc_id);
    st.bind_text(2, doc.title);
    st.bind_text(3, doc.abstract);
    st.bind_text(4, nlohmann::json(doc.authors).dump());
    if (doc.year) st.bind_int(5, *doc.year); else st.bind_null(5);
    if (doc.url) st.bind_text(6, *doc.url); else st.bind_null(6);
    if (sqlite3_step(st.get()) != SQLITE_DONE) throw Error(std::string("sqlite insert failed: ") + sqlite3_errmsg(db_));
    return sqlite3_changes(db_) == 1;
}

std::optional<CorpusDocument> MetadataStore::get(const std::string& doc_id) const {
    std::lock_guard lock(mu_);
    Statement st(db_, "SELECT id, title, abstract, authors, year, url FROM documents WHERE id = ?");
    st.bind_text(1, doc_id);
    const int rc = sqlite3_step(st.get());
    if (rc == SQLITE_DONE) return std::nullopt;
    if (rc != SQLITE_ROW) throw Error(std::string("sqlite read failed: ") + sqlite3_errmsg(db_));
    CorpusDocument doc;
    doc.doc_id = st.column_text(0);
    doc.title = st.column_text(1);
    doc.abstract = st.column_text(2);
    doc.authors = nlohmann::json::parse(st.column_text(3)).get<std::vector<std::string>>();
    if (!st.column_null(4)) doc.year = sqlite3_column_int(st.get(), 4);
    if (!st.column_null(5)) doc.url = st.column_text(5);
    return doc;
}

std::size_t MetadataStore::size() const {
    std::lock_guard lock(mu_);
    Statement st(db_, "SELECT COUNT(*) FROM documents");
    if (sqlite3_step(st.get()) != SQLITE_ROW) throw Error("sqlite count failed");
    return static_cast<std::size_t>(sqlite3_column_int64(st.get(), 0));
}

}  // namespace proseek
