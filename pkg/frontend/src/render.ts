// DOM builders. Each returns a detached element; app.ts decides where it
// goes. No templating, just createElement, so the output is inspectable
// in tests without a framework.

import type {
    ColumnInfo,
    JoinCandidate,
    JoinPreview,
    TableMeta,
} from "./api.js";

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

export function formatScore(score: number): string {
    return score.toFixed(4);
}

export function resultsTable(
    results: JoinCandidate[],
    onSelect: (candidate: JoinCandidate) => void,
): HTMLElement {
    if (results.length === 0) {
        return el("p", "empty", "No joinable columns found above the threshold.");
    }
    const table = el("table", "results");
    const head = table.createTHead().insertRow();
    for (const label of ["#", "database", "table", "column", "score"]) {
        head.appendChild(el("th", undefined, label));
    }
    const body = table.createTBody();
    results.forEach((candidate, i) => {
        const row = body.insertRow();
        row.className = "candidate";
        row.insertCell().textContent = String(i + 1);
        row.insertCell().textContent = candidate.database;
        row.insertCell().textContent = candidate.table;
        row.insertCell().textContent = candidate.column;
        const scoreCell = row.insertCell();
        scoreCell.className = "score";
        scoreCell.textContent = formatScore(candidate.score);
        row.addEventListener("click", () => onSelect(candidate));
    });
    return table;
}

export function columnList(
    table: string,
    columns: ColumnInfo[],
    joinColumn: string,
): HTMLElement {
    const wrap = el("div", "columns");
    wrap.appendChild(el("h3", undefined, `columns of ${table}`));
    const list = el("ul");
    for (const col of columns) {
        const item = el("li", col.name === joinColumn ? "join-col" : undefined);
        item.textContent = col.name;
        const stats =
            col.distinct_count === null
                ? "no stats"
                : `${col.distinct_count} distinct, ${col.null_count} null`;
        item.appendChild(el("span", "stats", ` (${stats})`));
        list.appendChild(item);
    }
    wrap.appendChild(list);
    return wrap;
}

export function previewTable(preview: JoinPreview): HTMLElement {
    const wrap = el("div", "preview");
    wrap.appendChild(
        el("p", "row-count", `${preview.total_rows} rows in query table`),
    );
    const table = el("table");
    const head = table.createTHead().insertRow();
    for (const name of preview.columns) {
        head.appendChild(el("th", undefined, name));
    }
    const body = table.createTBody();
    for (const row of preview.rows) {
        const tr = body.insertRow();
        for (const cell of row) {
            tr.insertCell().textContent = cell;
        }
    }
    wrap.appendChild(table);
    for (const warning of preview.warnings) {
        wrap.appendChild(el("p", "warning", warning));
    }
    return wrap;
}

export function tableOptions(select: HTMLSelectElement, tables: TableMeta[]) {
    select.replaceChildren();
    for (const t of tables) {
        const opt = el("option");
        opt.value = t.name;
        opt.textContent = `${t.database}.${t.name} (${t.row_count} rows)`;
        select.appendChild(opt);
    }
}

export function columnOptions(select: HTMLSelectElement, names: string[]) {
    select.replaceChildren();
    for (const name of names) {
        const opt = el("option");
        opt.value = name;
        opt.textContent = name;
        select.appendChild(opt);
    }
}

export function errorBanner(code: string, message: string): HTMLElement {
    return el("div", "error-banner", message ? `${code}: ${message}` : code);
}
