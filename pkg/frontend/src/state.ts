// UI state. Interaction handlers are async and can overlap (a slow search
// resolving after a newer one); RequestGate hands out a token per request
// and only the latest token is allowed to commit its result.

import type {
    ColumnInfo,
    JoinCandidate,
    JoinPreview,
    TableMeta,
} from "./api.js";

export class RequestGate {
    private seq = 0;

    begin(): number {
        return ++this.seq;
    }

    isCurrent(token: number): boolean {
        return token === this.seq;
    }
}

export interface AppState {
    tables: TableMeta[];
    queryTable: TableMeta | null;
    queryColumn: string | null;
    results: JoinCandidate[] | null;
    selected: JoinCandidate | null;
    selectedColumns: ColumnInfo[] | null;
    preview: JoinPreview | null;
    error: { code: string; message: string } | null;
}

export function initialState(): AppState {
    return {
        tables: [],
        queryTable: null,
        queryColumn: null,
        results: null,
        selected: null,
        selectedColumns: null,
        preview: null,
        error: null,
    };
}

export function tableByName(state: AppState, name: string): TableMeta | null {
    return state.tables.find((t) => t.name === name) ?? null;
}
