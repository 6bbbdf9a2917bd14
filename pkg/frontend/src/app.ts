// Wires the API client, state, and renderers into a working page.
// mountApp returns a controller whose lastTask promise settles when the
// most recent user action has finished touching the DOM; tests await it
// instead of polling.

import { ApiError, WarpgateClient } from "./api.js";
import type { JoinCandidate } from "./api.js";
import {
    columnList,
    columnOptions,
    errorBanner,
    previewTable,
    resultsTable,
    tableOptions,
} from "./render.js";
import { AppState, RequestGate, initialState, tableByName } from "./state.js";

const PREVIEW_LIMIT = 5;
const PREVIEW_EXTRA_COLUMNS = 2;

export class AppController {
    readonly state: AppState = initialState();
    lastTask: Promise<void> = Promise.resolve();

    private searchGate = new RequestGate();
    private detailGate = new RequestGate();

    private tableSelect: HTMLSelectElement;
    private columnSelect: HTMLSelectElement;
    private searchButton: HTMLButtonElement;
    private statusLine: HTMLElement;
    private resultsPane: HTMLElement;
    private detailPane: HTMLElement;
    private errorPane: HTMLElement;

    constructor(
        private readonly root: HTMLElement,
        private readonly client: WarpgateClient,
    ) {
        root.innerHTML = `
          <header>
            <h1>warpgate</h1>
            <p id="status" class="status">connecting</p>
          </header>
          <section class="query-bar">
            <label>table <select id="table-select"></select></label>
            <label>column <select id="column-select"></select></label>
            <button id="search-btn">find joins</button>
          </section>
          <div id="error"></div>
          <section id="results"></section>
          <section id="detail"></section>
        `;
        this.tableSelect = root.querySelector("#table-select")!;
        this.columnSelect = root.querySelector("#column-select")!;
        this.searchButton = root.querySelector("#search-btn")!;
        this.statusLine = root.querySelector("#status")!;
        this.resultsPane = root.querySelector("#results")!;
        this.detailPane = root.querySelector("#detail")!;
        this.errorPane = root.querySelector("#error")!;

        this.tableSelect.addEventListener("change", () => {
            this.syncColumnChoices();
        });
        this.searchButton.addEventListener("click", () => {
            this.lastTask = this.runSearch();
        });
    }

    async init(): Promise<void> {
        try {
            const [health, tables] = await Promise.all([
                this.client.health(),
                this.client.tables(),
            ]);
            this.state.tables = tables;
            this.statusLine.textContent = health.index_loaded
                ? `index loaded, ${tables.length} tables`
                : "no index loaded";
            tableOptions(this.tableSelect, tables);
            this.syncColumnChoices();
        } catch (err) {
            this.showError(err);
        }
    }

    private syncColumnChoices() {
        const meta = tableByName(this.state, this.tableSelect.value);
        this.state.queryTable = meta;
        columnOptions(this.columnSelect, meta ? meta.column_names : []);
    }

    async runSearch(): Promise<void> {
        const meta = tableByName(this.state, this.tableSelect.value);
        if (!meta) return;
        const column = this.columnSelect.value;
        this.state.queryTable = meta;
        this.state.queryColumn = column;
        const token = this.searchGate.begin();
        this.clearError();
        try {
            const results = await this.client.search({
                table_id: meta.table_id,
                column,
                k: 10,
            });
            if (!this.searchGate.isCurrent(token)) return;
            this.state.results = results;
            this.state.selected = null;
            this.state.preview = null;
            this.resultsPane.replaceChildren(
                resultsTable(results, (candidate) => {
                    this.lastTask = this.selectCandidate(candidate);
                }),
            );
            this.detailPane.replaceChildren();
        } catch (err) {
            if (this.searchGate.isCurrent(token)) this.showError(err);
        }
    }

    async selectCandidate(candidate: JoinCandidate): Promise<void> {
        const queryMeta = this.state.queryTable;
        const queryColumn = this.state.queryColumn;
        const candidateMeta = tableByName(this.state, candidate.table);
        if (!queryMeta || !queryColumn || !candidateMeta) return;
        const token = this.detailGate.begin();
        this.clearError();
        try {
            const listing = await this.client.columns(candidateMeta.table_id);
            if (!this.detailGate.isCurrent(token)) return;
            this.state.selected = candidate;
            this.state.selectedColumns = listing.columns;
            this.detailPane.replaceChildren(
                columnList(candidate.table, listing.columns, candidate.column),
            );

            const extra = listing.columns
                .map((c) => c.name)
                .filter((name) => name !== candidate.column)
                .slice(0, PREVIEW_EXTRA_COLUMNS);
            const preview = await this.client.previewJoin({
                query_table_id: queryMeta.table_id,
                query_column: queryColumn,
                candidate_table_id: candidateMeta.table_id,
                candidate_column: candidate.column,
                selected_columns: extra,
                limit: PREVIEW_LIMIT,
            });
            if (!this.detailGate.isCurrent(token)) return;
            this.state.preview = preview;
            this.detailPane.appendChild(previewTable(preview));
        } catch (err) {
            if (this.detailGate.isCurrent(token)) this.showError(err);
        }
    }

    private clearError() {
        this.state.error = null;
        this.errorPane.replaceChildren();
    }

    private showError(err: unknown) {
        const code = err instanceof ApiError ? err.code : "internal";
        const message = err instanceof Error ? err.message : String(err);
        this.state.error = { code, message };
        this.errorPane.replaceChildren(errorBanner(code, message));
    }
}

export async function mountApp(
    root: HTMLElement,
    client: WarpgateClient,
): Promise<AppController> {
    const app = new AppController(root, client);
    await app.init();
    return app;
}
