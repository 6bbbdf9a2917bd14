// Browser entry point. The UI is served at /ui so API paths resolve
// against the same origin's root.
import { WarpgateClient } from "./api.js";
import { mountApp } from "./app.js";
const root = document.getElementById("app");
if (root) {
    void mountApp(root, new WarpgateClient());
}
