// Typed client for the join discovery HTTP API. Every endpoint returns
// JSON; errors carry {code, message} and surface here as ApiError.
export class ApiError extends Error {
    constructor(code, message, status) {
        super(message);
        this.code = code;
        this.status = status;
        this.name = "ApiError";
    }
}
export class WarpgateClient {
    constructor(base = "", fetchFn = (...args) => fetch(...args)) {
        this.base = base;
        this.fetchFn = fetchFn;
    }
    async request(path, init) {
        let resp;
        try {
            resp = await this.fetchFn(this.base + path, init);
        }
        catch (err) {
            throw new ApiError("unreachable", String(err), 0);
        }
        const body = await resp.json();
        if (!resp.ok) {
            const code = typeof body?.code === "string" ? body.code : "internal";
            const message = typeof body?.message === "string" ? body.message : resp.statusText;
            throw new ApiError(code, message, resp.status);
        }
        return body;
    }
    post(path, payload) {
        return this.request(path, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(payload),
        });
    }
    health() {
        return this.request("/health");
    }
    async tables() {
        const body = await this.request("/tables");
        return body.tables;
    }
    table(tableId) {
        return this.request(`/tables/${encodeURIComponent(tableId)}`);
    }
    columns(tableId) {
        return this.request(`/tables/${encodeURIComponent(tableId)}/columns`);
    }
    rows(tableId, limit = 10) {
        return this.request(`/tables/${encodeURIComponent(tableId)}/rows?limit=${limit}`);
    }
    search(req) {
        return this.post("/search", req);
    }
    previewJoin(req) {
        return this.post("/preview-join", req);
    }
}
