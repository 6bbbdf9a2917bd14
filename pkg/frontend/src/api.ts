// Typed client for the join discovery HTTP API. Every endpoint returns
// JSON; errors carry {code, message} and surface here as ApiError.

export interface TableMeta {
    table_id: string;
    name: string;
    database: string;
    source_path: string;
    column_names: string[];
    row_count: number;
    row_count_exact: boolean;
}

export interface ColumnInfo {
    name: string;
    index: number;
    distinct_count: number | null;
    null_count: number | null;
    indexed: boolean;
}

export interface TableColumns {
    table_id: string;
    columns: ColumnInfo[];
}

export interface TableRows {
    table_id: string;
    columns: string[];
    rows: string[][];
}

export interface JoinCandidate {
    database: string;
    table: string;
    column: string;
    score: number;
}

export interface JoinPreview {
    columns: string[];
    rows: string[][];
    warnings: string[];
    total_rows: number;
}

export interface HealthInfo {
    status: string;
    index_loaded: boolean;
    manifest: Record<string, unknown> | null;
}

export interface SearchRequest {
    table_id: string;
    column: string | number;
    k?: number;
    min_score?: number;
}

export interface PreviewRequest {
    query_table_id: string;
    query_column: string | number;
    candidate_table_id: string;
    candidate_column: string | number;
    selected_columns?: string[];
    limit?: number;
}

export class ApiError extends Error {
    constructor(
        readonly code: string,
        message: string,
        readonly status: number,
    ) {
        super(message);
        this.name = "ApiError";
    }
}

type FetchFn = typeof fetch;

export class WarpgateClient {
    constructor(
        private readonly base = "",
        private readonly fetchFn: FetchFn = (...args) => fetch(...args),
    ) {}

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        let resp: Response;
        try {
            resp = await this.fetchFn(this.base + path, init);
        } catch (err) {
            throw new ApiError("unreachable", String(err), 0);
        }
        const body = await resp.json();
        if (!resp.ok) {
            const code = typeof body?.code === "string" ? body.code : "internal";
            const message =
                typeof body?.message === "string" ? body.message : resp.statusText;
            throw new ApiError(code, message, resp.status);
        }
        return body as T;
    }

    private post<T>(path: string, payload: unknown): Promise<T> {
        return this.request<T>(path, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(payload),
        });
    }

    health(): Promise<HealthInfo> {
        return this.request("/health");
    }

    async tables(): Promise<TableMeta[]> {
        const body = await this.request<{ tables: TableMeta[] }>("/tables");
        return body.tables;
    }

    table(tableId: string): Promise<TableMeta> {
        return this.request(`/tables/${encodeURIComponent(tableId)}`);
    }

    columns(tableId: string): Promise<TableColumns> {
        return this.request(`/tables/${encodeURIComponent(tableId)}/columns`);
    }

    rows(tableId: string, limit = 10): Promise<TableRows> {
        return this.request(
            `/tables/${encodeURIComponent(tableId)}/rows?limit=${limit}`,
        );
    }

    search(req: SearchRequest): Promise<JoinCandidate[]> {
        return this.post("/search", req);
    }

    previewJoin(req: PreviewRequest): Promise<JoinPreview> {
        return this.post("/preview-join", req);
    }
}
