// UI state. Interaction handlers are async and can overlap (a slow search
// resolving after a newer one); RequestGate hands out a token per request
// and only the latest token is allowed to commit its result.
export class RequestGate {
    constructor() {
        this.seq = 0;
    }
    begin() {
        return ++this.seq;
    }
    isCurrent(token) {
        return token === this.seq;
    }
}
export function initialState() {
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
export function tableByName(state, name) {
    return state.tables.find((t) => t.name === name) ?? null;
}
