import { ApiClient } from "./api.js";
import { App } from "./views.js";

// Same-origin by default (the service mounts the UI at /ui); override with
// ?api=http://host:port when serving the bundle from elsewhere.
const base = new URLSearchParams(location.search).get("api") ?? "";
const app = new App(document.getElementById("app")!, new ApiClient(base));

window.addEventListener("hashchange", () => void app.route(location.hash));
void app.route(location.hash);
