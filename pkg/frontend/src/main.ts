import { Client } from "./api.js";
import { App } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8000";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

const app = new App({ client: new Client(baseUrl), root });
const group = params.get("group");
void app.start({
  group: group ? Number(group) : undefined,
  experience: params.get("experience") ?? "beginner",
});
